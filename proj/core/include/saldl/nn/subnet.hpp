#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saldl/nn/layers.hpp"
#include "saldl/nn/tensor.hpp"

namespace saldl::nn {

/// A plain stack of 5x5 convolution blocks. Every layer but the last is
/// followed by ReLU; the last one emits signed values.
struct SubnetSpec {
    std::string name;
    int block_count = 0;
    int input_channels = 1;
    int hidden_channels = 64;
    int output_channels = 1;

    void validate() const;
    /// (in, out) channel pair of each conv layer in order.
    std::vector<std::pair<int, int>> layer_shapes() const;

    friend bool operator==(const SubnetSpec&, const SubnetSpec&) = default;
};

template <class T>
class Subnet {
public:
    /// Activations cached by a training forward pass: the input of each conv
    /// layer. The input of layer l > 0 is relu(output of layer l-1), so it
    /// also serves as the ReLU mask.
    struct Cache {
        std::vector<Tensor4<T>> inputs;
    };

    Subnet() = default;
    explicit Subnet(SubnetSpec spec);

    /// Uniform(-b, b) with b = sqrt(6 / (fan_in + fan_out)); biases 0.
    static Subnet initialized(SubnetSpec spec, std::uint64_t seed);

    const SubnetSpec& spec() const noexcept { return spec_; }
    std::vector<ConvParams<T>>& layers() noexcept { return layers_; }
    const std::vector<ConvParams<T>>& layers() const noexcept { return layers_; }

    bool frozen() const noexcept { return frozen_; }
    void set_frozen(bool frozen) noexcept { frozen_ = frozen; }

    Tensor4<T> forward(const Tensor4<T>& x) const;
    Tensor4<T> forward(const Tensor4<T>& x, Cache& cache) const;

    /// Accumulates into `grads` (one entry per layer). Returns the gradient
    /// with respect to the subnet input when `want_input_grad` is set,
    /// otherwise an empty tensor.
    Tensor4<T> backward(const Cache& cache, const Tensor4<T>& grad_out,
                        std::vector<ConvGrads<T>>& grads, bool want_input_grad) const;

    std::vector<ConvGrads<T>> zero_grads() const;
    std::size_t parameter_count() const noexcept;
    void set_zero();

    template <class U>
    Subnet<U> cast() const {
        Subnet<U> out(spec_);
        out.set_frozen(frozen_);
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            auto& dst = out.layers()[l];
            for (std::size_t i = 0; i < dst.weights.size(); ++i)
                dst.weights[i] = static_cast<U>(layers_[l].weights[i]);
            for (std::size_t i = 0; i < dst.bias.size(); ++i)
                dst.bias[i] = static_cast<U>(layers_[l].bias[i]);
        }
        return out;
    }

    friend bool operator==(const Subnet&, const Subnet&) = default;

private:
    SubnetSpec spec_;
    std::vector<ConvParams<T>> layers_;
    bool frozen_ = false;
};

extern template class Subnet<float>;
extern template class Subnet<double>;

/// Hash of the ReLU on/off pattern stored in a cache; used to detect
/// finite-difference probes that cross a kink.
template <class T>
std::uint64_t relu_signature(const typename Subnet<T>::Cache& cache, std::uint64_t seed = 0);

/// FNV-1a over the raw parameter bytes; used for freeze checks.
template <class T>
std::uint64_t parameter_hash(const Subnet<T>& net);

/// Optimizer state for mini-batch gradient descent. With momentum 0 this is
/// exactly p <- p - lr * g.
template <class T>
class SgdOptimizer {
public:
    explicit SgdOptimizer(double momentum = 0.0) : momentum_(momentum) {}

    void step(Subnet<T>& net, const std::vector<ConvGrads<T>>& grads, double lr);

private:
    double momentum_;
    std::vector<ConvParams<T>> velocity_;
};

extern template class SgdOptimizer<float>;
extern template class SgdOptimizer<double>;

}  // namespace saldl::nn
