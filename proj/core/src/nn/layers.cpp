#include "saldl/nn/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cstring>
#include <string>

#include "saldl/error.hpp"

namespace saldl::nn {

namespace {

template <class T>
using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Strided = Eigen::OuterStride<>;

constexpr std::size_t kColBudget = std::size_t{1} << 20;

int rows_per_chunk(int k, int h, int w) {
    std::size_t per_row = static_cast<std::size_t>(k) * w;
    int rows = static_cast<int>(std::max<std::size_t>(1, kColBudget / std::max<std::size_t>(1, per_row)));
    return std::min(rows, h);
}

// Gathers the zero-padded 5x5 neighbourhoods of output rows [y0, y1) into a
// (c*25) x ((y1-y0)*w) row-major matrix.
template <class T>
void im2col(std::span<const T> sample, int channels, int h, int w, int y0, int y1,
            MatR<T>& col) {
    const int p = (y1 - y0) * w;
    col.resize(static_cast<Eigen::Index>(channels) * kConvSide * kConvSide, p);
    for (int c = 0; c < channels; ++c) {
        const T* plane = sample.data() + static_cast<std::size_t>(c) * h * w;
        for (int u = 0; u < kConvSide; ++u) {
            for (int v = 0; v < kConvSide; ++v) {
                T* row = col.data() + ((static_cast<std::size_t>(c) * kConvSide + u) * kConvSide + v) * p;
                const int xlo = std::max(0, kConvPad - v);
                const int xhi = std::min(w, w + kConvPad - v);
                for (int y = y0; y < y1; ++y) {
                    T* dst = row + static_cast<std::size_t>(y - y0) * w;
                    const int sy = y + u - kConvPad;
                    if (sy < 0 || sy >= h) {
                        std::fill(dst, dst + w, T(0));
                        continue;
                    }
                    const T* src = plane + static_cast<std::size_t>(sy) * w + (v - kConvPad);
                    std::fill(dst, dst + xlo, T(0));
                    for (int x = xlo; x < xhi; ++x) dst[x] = src[x];
                    std::fill(dst + xhi, dst + w, T(0));
                }
            }
        }
    }
}

template <class T>
void col2im_add(const MatR<T>& col, int channels, int h, int w, int y0, int y1,
                std::span<T> sample) {
    const int p = (y1 - y0) * w;
    for (int c = 0; c < channels; ++c) {
        T* plane = sample.data() + static_cast<std::size_t>(c) * h * w;
        for (int u = 0; u < kConvSide; ++u) {
            for (int v = 0; v < kConvSide; ++v) {
                const T* row =
                    col.data() + ((static_cast<std::size_t>(c) * kConvSide + u) * kConvSide + v) * p;
                const int xlo = std::max(0, kConvPad - v);
                const int xhi = std::min(w, w + kConvPad - v);
                for (int y = y0; y < y1; ++y) {
                    const int sy = y + u - kConvPad;
                    if (sy < 0 || sy >= h) continue;
                    const T* src = row + static_cast<std::size_t>(y - y0) * w;
                    T* dst = plane + static_cast<std::size_t>(sy) * w + (v - kConvPad);
                    for (int x = xlo; x < xhi; ++x) dst[x] += src[x];
                }
            }
        }
    }
}

template <class T>
void check_conv_input(const Tensor4<T>& x, const ConvParams<T>& p) {
    if (x.c() != p.in_channels) {
        throw DimensionError("conv channel mismatch: input has " + std::to_string(x.c()) +
                             " channels, layer expects " + std::to_string(p.in_channels));
    }
}

}  // namespace

template <class T>
ConvParams<T>::ConvParams(int in, int out) : in_channels(in), out_channels(out) {
    if (in < 1 || out < 1) throw InvalidArgument("conv layer channel counts must be positive");
    weights.assign(static_cast<std::size_t>(out) * in * kConvSide * kConvSide, T(0));
    bias.assign(static_cast<std::size_t>(out), T(0));
}

template <class T>
void ConvParams<T>::set_zero() {
    std::fill(weights.begin(), weights.end(), T(0));
    std::fill(bias.begin(), bias.end(), T(0));
}

template <class T>
Tensor4<T> conv_forward(const Tensor4<T>& x, const ConvParams<T>& p) {
    check_conv_input(x, p);
    const int h = x.h();
    const int w = x.w();
    const int m = p.out_channels;
    const int k = p.in_channels * kConvSide * kConvSide;
    const Eigen::Index hw = static_cast<Eigen::Index>(h) * w;
    Tensor4<T> out(x.n(), m, h, w);
    Eigen::Map<const MatR<T>> weights(p.weights.data(), m, k);
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bias(p.bias.data(), m);
    MatR<T> col;
    const int chunk = rows_per_chunk(k, h, w);
    for (int n = 0; n < x.n(); ++n) {
        for (int y0 = 0; y0 < h; y0 += chunk) {
            const int y1 = std::min(h, y0 + chunk);
            im2col<T>(x.sample(n), p.in_channels, h, w, y0, y1, col);
            Eigen::Map<MatR<T>, 0, Strided> o(out.sample(n).data() + static_cast<std::size_t>(y0) * w,
                                              m, col.cols(), Strided(hw));
            o.noalias() = weights * col;
            o.colwise() += bias;
        }
    }
    return out;
}

template <class T>
void conv_backward_accumulate(const Tensor4<T>& x, const ConvParams<T>& p,
                              const Tensor4<T>& grad_out, ConvGrads<T>& grads,
                              Tensor4<T>* grad_input) {
    check_conv_input(x, p);
    if (grad_out.n() != x.n() || grad_out.c() != p.out_channels || grad_out.h() != x.h() ||
        grad_out.w() != x.w()) {
        throw DimensionError("conv backward: gradient shape does not match forward output");
    }
    if (grads.in_channels != p.in_channels || grads.out_channels != p.out_channels) {
        throw DimensionError("conv backward: gradient bundle shape mismatch");
    }
    const int h = x.h();
    const int w = x.w();
    const int m = p.out_channels;
    const int k = p.in_channels * kConvSide * kConvSide;
    const Eigen::Index hw = static_cast<Eigen::Index>(h) * w;
    if (grad_input) *grad_input = Tensor4<T>(x.n(), x.c(), h, w);

    Eigen::Map<const MatR<T>> weights(p.weights.data(), m, k);
    Eigen::Map<MatR<T>> gw(grads.weights.data(), m, k);
    Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> gb(grads.bias.data(), m);
    MatR<T> col;
    MatR<T> gcol;
    const int chunk = rows_per_chunk(k, h, w);
    for (int n = 0; n < x.n(); ++n) {
        for (int y0 = 0; y0 < h; y0 += chunk) {
            const int y1 = std::min(h, y0 + chunk);
            im2col<T>(x.sample(n), p.in_channels, h, w, y0, y1, col);
            Eigen::Map<const MatR<T>, 0, Strided> g(
                grad_out.sample(n).data() + static_cast<std::size_t>(y0) * w, m, col.cols(),
                Strided(hw));
            gw.noalias() += g * col.transpose();
            gb += g.rowwise().sum();
            if (grad_input) {
                gcol.noalias() = weights.transpose() * g;
                col2im_add<T>(gcol, p.in_channels, h, w, y0, y1, grad_input->sample(n));
            }
        }
    }
}

template <class T>
ConvBackwardResult<T> conv_backward(const Tensor4<T>& x, const ConvParams<T>& p,
                                    const Tensor4<T>& grad_out) {
    ConvBackwardResult<T> r{Tensor4<T>(), ConvGrads<T>(p.in_channels, p.out_channels)};
    conv_backward_accumulate(x, p, grad_out, r.grads, &r.grad_input);
    return r;
}

template <class T>
Tensor4<T> relu_forward(const Tensor4<T>& x) {
    Tensor4<T> out = x;
    for (T& v : out.data()) v = v > T(0) ? v : T(0);
    return out;
}

template <class T>
Tensor4<T> relu_backward(const Tensor4<T>& x, const Tensor4<T>& grad_out) {
    if (!x.same_shape(grad_out)) throw DimensionError("relu backward shape mismatch");
    Tensor4<T> g = grad_out;
    auto xs = x.data();
    auto gs = g.data();
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (!(xs[i] > T(0))) gs[i] = T(0);
    }
    return g;
}

template <class T>
Tensor4<T> concat_channels(const std::vector<const Tensor4<T>*>& xs) {
    if (xs.empty()) throw InvalidArgument("concat of zero tensors");
    const Tensor4<T>& first = *xs.front();
    int channels = 0;
    for (const auto* t : xs) {
        if (t->n() != first.n() || t->h() != first.h() || t->w() != first.w()) {
            throw DimensionError("concat inputs differ in batch or spatial size");
        }
        channels += t->c();
    }
    Tensor4<T> out(first.n(), channels, first.h(), first.w());
    for (int n = 0; n < first.n(); ++n) {
        T* dst = out.sample(n).data();
        for (const auto* t : xs) {
            auto src = t->sample(n);
            dst = std::copy(src.begin(), src.end(), dst);
        }
    }
    return out;
}

template <class T>
std::vector<Tensor4<T>> split_channels(const Tensor4<T>& x, std::span<const int> channels) {
    int total = 0;
    for (int c : channels) {
        if (c < 1) throw InvalidArgument("split widths must be positive");
        total += c;
    }
    if (total != x.c()) throw DimensionError("split widths do not sum to channel count");
    std::vector<Tensor4<T>> parts;
    parts.reserve(channels.size());
    for (int c : channels) parts.emplace_back(x.n(), c, x.h(), x.w());
    for (int n = 0; n < x.n(); ++n) {
        const T* src = x.sample(n).data();
        for (auto& part : parts) {
            auto dst = part.sample(n);
            std::copy(src, src + dst.size(), dst.begin());
            src += dst.size();
        }
    }
    return parts;
}

template <class T>
LossResult<T> mse_loss(const Tensor4<T>& pred, const Tensor4<T>& target) {
    if (!pred.same_shape(target)) throw DimensionError("loss: prediction and target shapes differ");
    LossResult<T> r{0.0, Tensor4<T>(pred.n(), pred.c(), pred.h(), pred.w())};
    const double inv_m = 1.0 / pred.n();
    auto p = pred.data();
    auto t = target.data();
    auto g = r.grad.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = static_cast<double>(p[i]) - static_cast<double>(t[i]);
        sum += d * d;
        g[i] = static_cast<T>(2.0 * inv_m * d);
    }
    r.loss = sum * inv_m;
    return r;
}

template <class T>
void sgd_step(ConvParams<T>& params, const ConvGrads<T>& grads, double lr) {
    if (params.weights.size() != grads.weights.size() || params.bias.size() != grads.bias.size()) {
        throw DimensionError("sgd: gradient shape mismatch");
    }
    const T step = static_cast<T>(lr);
    for (std::size_t i = 0; i < params.weights.size(); ++i) params.weights[i] -= step * grads.weights[i];
    for (std::size_t i = 0; i < params.bias.size(); ++i) params.bias[i] -= step * grads.bias[i];
}

#define SALDL_INSTANTIATE_LAYERS(T)                                                              \
    template struct ConvParams<T>;                                                               \
    template Tensor4<T> conv_forward<T>(const Tensor4<T>&, const ConvParams<T>&);                \
    template ConvBackwardResult<T> conv_backward<T>(const Tensor4<T>&, const ConvParams<T>&,     \
                                                    const Tensor4<T>&);                          \
    template void conv_backward_accumulate<T>(const Tensor4<T>&, const ConvParams<T>&,           \
                                              const Tensor4<T>&, ConvGrads<T>&, Tensor4<T>*);    \
    template Tensor4<T> relu_forward<T>(const Tensor4<T>&);                                      \
    template Tensor4<T> relu_backward<T>(const Tensor4<T>&, const Tensor4<T>&);                  \
    template Tensor4<T> concat_channels<T>(const std::vector<const Tensor4<T>*>&);               \
    template std::vector<Tensor4<T>> split_channels<T>(const Tensor4<T>&, std::span<const int>); \
    template LossResult<T> mse_loss<T>(const Tensor4<T>&, const Tensor4<T>&);                    \
    template void sgd_step<T>(ConvParams<T>&, const ConvGrads<T>&, double);

SALDL_INSTANTIATE_LAYERS(float)
SALDL_INSTANTIATE_LAYERS(double)

#undef SALDL_INSTANTIATE_LAYERS

}  // namespace saldl::nn
