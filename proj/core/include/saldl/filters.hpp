#pragma once

#include <span>
#include <vector>

#include "saldl/image.hpp"

namespace saldl {

/// Square filter with an odd side length, taps stored row-major.
class Kernel {
public:
    Kernel(int side, std::vector<double> taps);

    int side() const noexcept { return side_; }
    int radius() const noexcept { return side_ / 2; }
    double at(int i, int j) const { return taps_[static_cast<std::size_t>(i) * side_ + j]; }
    std::span<const double> taps() const noexcept { return taps_; }

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    int side_;
    std::vector<double> taps_;
};

/// Normalized isotropic Gaussian, taps proportional to exp(-r^2 / (2 sigma^2)).
Kernel gaussian_kernel(double sigma, int side);

/// The frozen blur used throughout the pipeline: sigma 1, 5x5.
inline Kernel default_gcm_kernel() { return gaussian_kernel(1.0, 5); }

/// 4-neighbour discrete Laplacian [[0,1,0],[1,-4,1],[0,1,0]].
Kernel laplacian_kernel();

/// Same-size 2-D convolution with edge replication at the borders. Throws
/// DimensionError if the kernel is larger than the image.
GrayImage convolve_same(const GrayImage& img, const Kernel& k);

GrayImage laplacian_map(const GrayImage& img);

}  // namespace saldl
