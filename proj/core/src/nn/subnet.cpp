#include "saldl/nn/subnet.hpp"

#include <cmath>
#include <random>
#include <string>

#include "saldl/error.hpp"

namespace saldl::nn {

void SubnetSpec::validate() const {
    if (block_count < 1) throw InvalidArgument("subnet '" + name + "': block count must be >= 1");
    if (input_channels < 1 || hidden_channels < 1 || output_channels < 1) {
        throw InvalidArgument("subnet '" + name + "': channel counts must be positive");
    }
}

std::vector<std::pair<int, int>> SubnetSpec::layer_shapes() const {
    validate();
    std::vector<std::pair<int, int>> shapes;
    if (block_count == 1) {
        shapes.emplace_back(input_channels, output_channels);
        return shapes;
    }
    shapes.emplace_back(input_channels, hidden_channels);
    for (int i = 1; i + 1 < block_count; ++i) shapes.emplace_back(hidden_channels, hidden_channels);
    shapes.emplace_back(hidden_channels, output_channels);
    return shapes;
}

template <class T>
Subnet<T>::Subnet(SubnetSpec spec) : spec_(std::move(spec)) {
    for (auto [in, out] : spec_.layer_shapes()) layers_.emplace_back(in, out);
}

template <class T>
Subnet<T> Subnet<T>::initialized(SubnetSpec spec, std::uint64_t seed) {
    Subnet net(std::move(spec));
    std::mt19937_64 rng(seed);
    // 53-bit uniform in [0, 1) built by hand so the stream does not depend
    // on the standard library's distribution implementation.
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (auto& layer : net.layers_) {
        const double fan_in = static_cast<double>(layer.in_channels) * kConvSide * kConvSide;
        const double fan_out = static_cast<double>(layer.out_channels) * kConvSide * kConvSide;
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (T& w : layer.weights) w = static_cast<T>((2.0 * uniform() - 1.0) * bound);
    }
    return net;
}

template <class T>
Tensor4<T> Subnet<T>::forward(const Tensor4<T>& x) const {
    Tensor4<T> a = x;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        a = conv_forward(a, layers_[l]);
        if (l + 1 < layers_.size()) {
            for (T& v : a.data()) v = v > T(0) ? v : T(0);
        }
    }
    return a;
}

template <class T>
Tensor4<T> Subnet<T>::forward(const Tensor4<T>& x, Cache& cache) const {
    cache.inputs.clear();
    cache.inputs.reserve(layers_.size());
    cache.inputs.push_back(x);
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        Tensor4<T> z = conv_forward(cache.inputs.back(), layers_[l]);
        for (T& v : z.data()) v = v > T(0) ? v : T(0);
        cache.inputs.push_back(std::move(z));
    }
    return conv_forward(cache.inputs.back(), layers_.back());
}

template <class T>
Tensor4<T> Subnet<T>::backward(const Cache& cache, const Tensor4<T>& grad_out,
                               std::vector<ConvGrads<T>>& grads, bool want_input_grad) const {
    if (cache.inputs.size() != layers_.size()) throw InvalidArgument("subnet backward: stale cache");
    if (grads.size() != layers_.size()) throw DimensionError("subnet backward: gradient bundle size");
    Tensor4<T> g = grad_out;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const bool need_input = l > 0 || want_input_grad;
        Tensor4<T> gin;
        conv_backward_accumulate(cache.inputs[l], layers_[l], g, grads[l], need_input ? &gin : nullptr);
        if (l == 0) return want_input_grad ? gin : Tensor4<T>();
        // cache.inputs[l] = relu(z_{l-1}): positive exactly where z_{l-1} > 0.
        auto mask = cache.inputs[l].data();
        auto gs = gin.data();
        for (std::size_t i = 0; i < gs.size(); ++i) {
            if (!(mask[i] > T(0))) gs[i] = T(0);
        }
        g = std::move(gin);
    }
    return Tensor4<T>();
}

template <class T>
std::vector<ConvGrads<T>> Subnet<T>::zero_grads() const {
    std::vector<ConvGrads<T>> grads;
    grads.reserve(layers_.size());
    for (const auto& l : layers_) grads.emplace_back(l.in_channels, l.out_channels);
    return grads;
}

template <class T>
std::size_t Subnet<T>::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.parameter_count();
    return n;
}

template <class T>
void Subnet<T>::set_zero() {
    for (auto& l : layers_) l.set_zero();
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
}

}  // namespace

template <class T>
std::uint64_t relu_signature(const typename Subnet<T>::Cache& cache, std::uint64_t seed) {
    std::uint64_t h = kFnvOffset ^ seed;
    for (std::size_t l = 1; l < cache.inputs.size(); ++l) {
        for (T v : cache.inputs[l].data()) {
            unsigned char bit = v > T(0) ? 1 : 0;
            fnv_mix(h, &bit, 1);
        }
    }
    return h;
}

template <class T>
std::uint64_t parameter_hash(const Subnet<T>& net) {
    std::uint64_t h = kFnvOffset;
    for (const auto& l : net.layers()) {
        fnv_mix(h, l.weights.data(), l.weights.size() * sizeof(T));
        fnv_mix(h, l.bias.data(), l.bias.size() * sizeof(T));
    }
    return h;
}

template <class T>
void SgdOptimizer<T>::step(Subnet<T>& net, const std::vector<ConvGrads<T>>& grads, double lr) {
    if (net.frozen()) throw InvalidArgument("sgd step on frozen subnet '" + net.spec().name + "'");
    auto& layers = net.layers();
    if (grads.size() != layers.size()) throw DimensionError("sgd: gradient bundle size mismatch");
    if (momentum_ == 0.0) {
        for (std::size_t l = 0; l < layers.size(); ++l) sgd_step(layers[l], grads[l], lr);
        return;
    }
    if (velocity_.size() != layers.size()) velocity_ = net.zero_grads();
    const T mu = static_cast<T>(momentum_);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        auto& v = velocity_[l];
        for (std::size_t i = 0; i < v.weights.size(); ++i) v.weights[i] = mu * v.weights[i] + grads[l].weights[i];
        for (std::size_t i = 0; i < v.bias.size(); ++i) v.bias[i] = mu * v.bias[i] + grads[l].bias[i];
        sgd_step(layers[l], v, lr);
    }
}

template class Subnet<float>;
template class Subnet<double>;
template class SgdOptimizer<float>;
template class SgdOptimizer<double>;
template std::uint64_t relu_signature<float>(const Subnet<float>::Cache&, std::uint64_t);
template std::uint64_t relu_signature<double>(const Subnet<double>::Cache&, std::uint64_t);
template std::uint64_t parameter_hash<float>(const Subnet<float>&);
template std::uint64_t parameter_hash<double>(const Subnet<double>&);

}  // namespace saldl::nn
