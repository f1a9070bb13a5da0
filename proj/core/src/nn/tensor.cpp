#include "saldl/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "saldl/error.hpp"

namespace saldl::nn {

template <class T>
Tensor4<T>::Tensor4(int n, int c, int h, int w, T fill) : n_(n), c_(c), h_(h), w_(w) {
    if (n < 1 || c < 1 || h < 1 || w < 1) throw DimensionError("tensor dimensions must be positive");
    data_.assign(static_cast<std::size_t>(n) * c * h * w, fill);
}

template <class T>
bool Tensor4<T>::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
}

template class Tensor4<float>;
template class Tensor4<double>;

}  // namespace saldl::nn
