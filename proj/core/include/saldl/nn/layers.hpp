#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "saldl/nn/tensor.hpp"

namespace saldl::nn {

inline constexpr int kConvSide = 5;
inline constexpr int kConvPad = 2;

/// Weights of one 5x5 convolution layer: m filters over c input channels,
/// stored [m][c][5][5], plus one bias per filter.
template <class T>
struct ConvParams {
    int in_channels = 0;
    int out_channels = 0;
    AlignedVector<T> weights;
    AlignedVector<T> bias;

    ConvParams() = default;
    ConvParams(int in, int out);

    T& w(int m, int c, int u, int v) {
        return weights[((static_cast<std::size_t>(m) * in_channels + c) * kConvSide + u) *
                           kConvSide + v];
    }
    T w(int m, int c, int u, int v) const {
        return weights[((static_cast<std::size_t>(m) * in_channels + c) * kConvSide + u) *
                           kConvSide + v];
    }

    std::size_t parameter_count() const noexcept { return weights.size() + bias.size(); }
    void set_zero();

    friend bool operator==(const ConvParams&, const ConvParams&) = default;
};

/// Gradient storage is congruent with the parameters it differentiates.
template <class T>
using ConvGrads = ConvParams<T>;

template <class T>
struct ConvBackwardResult {
    Tensor4<T> grad_input;
    ConvGrads<T> grads;
};

/// Stride 1, zero padding 2: output spatial size equals input size.
/// out[n,m,i,j] = bias[m] + sum_{c,u,v} w[m,c,u,v] * xpad[n,c,i+u,j+v]
template <class T>
Tensor4<T> conv_forward(const Tensor4<T>& x, const ConvParams<T>& p);

template <class T>
ConvBackwardResult<T> conv_backward(const Tensor4<T>& x, const ConvParams<T>& p,
                                    const Tensor4<T>& grad_out);

/// Accumulates parameter gradients into `grads`; writes the input gradient
/// into `grad_input` when non-null.
template <class T>
void conv_backward_accumulate(const Tensor4<T>& x, const ConvParams<T>& p,
                              const Tensor4<T>& grad_out, ConvGrads<T>& grads,
                              Tensor4<T>* grad_input);

template <class T>
Tensor4<T> relu_forward(const Tensor4<T>& x);

/// Masks grad_out where the forward input was <= 0.
template <class T>
Tensor4<T> relu_backward(const Tensor4<T>& x, const Tensor4<T>& grad_out);

template <class T>
Tensor4<T> concat_channels(const std::vector<const Tensor4<T>*>& xs);

/// Inverse of concat_channels: splits along channels at the given widths.
template <class T>
std::vector<Tensor4<T>> split_channels(const Tensor4<T>& x, std::span<const int> channels);

template <class T>
struct LossResult {
    double loss = 0.0;
    Tensor4<T> grad;
};

/// loss = (1/M) * sum_i ||pred_i - target_i||^2 with M the batch size;
/// grad = (2/M) * (pred - target).
template <class T>
LossResult<T> mse_loss(const Tensor4<T>& pred, const Tensor4<T>& target);

/// p <- p - lr * g, elementwise.
template <class T>
void sgd_step(ConvParams<T>& params, const ConvGrads<T>& grads, double lr);

}  // namespace saldl::nn
