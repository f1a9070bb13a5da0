#pragma once

#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace saldl::nn {

/// Heap storage on 64-byte boundaries. Vectorized reductions then round the
/// same way for every buffer.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::align_val_t kAlignment{64};

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlignment)); }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Dense N x C x H x W array, contiguous in that order.
template <class T>
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(int n, int c, int h, int w, T fill = T(0));

    int n() const noexcept { return n_; }
    int c() const noexcept { return c_; }
    int h() const noexcept { return h_; }
    int w() const noexcept { return w_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t plane_size() const noexcept { return static_cast<std::size_t>(h_) * w_; }
    std::size_t sample_size() const noexcept { return plane_size() * c_; }

    T& at(int n, int c, int y, int x) { return data_[offset(n, c, y, x)]; }
    T at(int n, int c, int y, int x) const { return data_[offset(n, c, y, x)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    std::span<T> sample(int n) { return {data_.data() + n * sample_size(), sample_size()}; }
    std::span<const T> sample(int n) const {
        return {data_.data() + n * sample_size(), sample_size()};
    }
    std::span<T> plane(int n, int c) {
        return {data_.data() + offset(n, c, 0, 0), plane_size()};
    }
    std::span<const T> plane(int n, int c) const {
        return {data_.data() + offset(n, c, 0, 0), plane_size()};
    }

    bool same_shape(const Tensor4& o) const noexcept {
        return n_ == o.n_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
    }

    bool all_finite() const noexcept;

    friend bool operator==(const Tensor4&, const Tensor4&) = default;

private:
    std::size_t offset(int n, int c, int y, int x) const noexcept {
        return ((static_cast<std::size_t>(n) * c_ + c) * h_ + y) * w_ + x;
    }

    int n_ = 0;
    int c_ = 0;
    int h_ = 0;
    int w_ = 0;
    AlignedVector<T> data_;
};

extern template class Tensor4<float>;
extern template class Tensor4<double>;

using Tensor4f = Tensor4<float>;
using Tensor4d = Tensor4<double>;

}  // namespace saldl::nn
