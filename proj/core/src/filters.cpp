#include "saldl/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "saldl/error.hpp"

namespace saldl {

Kernel::Kernel(int side, std::vector<double> taps) : side_(side), taps_(std::move(taps)) {
    if (side < 1 || side % 2 == 0) {
        throw InvalidArgument("kernel side must be odd and positive, got " +
                              std::to_string(side));
    }
    if (taps_.size() != static_cast<std::size_t>(side) * side) {
        throw DimensionError("kernel tap count does not match side");
    }
}

Kernel gaussian_kernel(double sigma, int side) {
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian sigma must be positive");
    if (side < 1 || side % 2 == 0) throw InvalidArgument("gaussian side must be odd");
    const int c = side / 2;
    std::vector<double> taps(static_cast<std::size_t>(side) * side);
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            double r2 = static_cast<double>((i - c) * (i - c) + (j - c) * (j - c));
            taps[static_cast<std::size_t>(i) * side + j] = std::exp(-r2 / (2.0 * sigma * sigma));
        }
    }
    double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
    for (double& t : taps) t /= sum;
    return Kernel(side, std::move(taps));
}

Kernel laplacian_kernel() {
    return Kernel(3, {0.0, 1.0, 0.0, 1.0, -4.0, 1.0, 0.0, 1.0, 0.0});
}

GrayImage convolve_same(const GrayImage& img, const Kernel& k) {
    const int h = img.height();
    const int w = img.width();
    const int r = k.radius();
    if (k.side() > h || k.side() > w) {
        throw DimensionError("kernel " + std::to_string(k.side()) + "x" +
                             std::to_string(k.side()) + " larger than image " +
                             std::to_string(h) + "x" + std::to_string(w));
    }
    GrayImage out(h, w);
    // out(y, x) = sum_{u,v} k(u, v) * img(y - (u - r), x - (v - r)): a true
    // convolution, i.e. correlation with the flipped kernel.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int u = 0; u < k.side(); ++u) {
                int sy = std::clamp(y + r - u, 0, h - 1);
                for (int v = 0; v < k.side(); ++v) {
                    int sx = std::clamp(x + r - v, 0, w - 1);
                    acc += k.at(u, v) * img.at(sy, sx);
                }
            }
            out.at(y, x) = acc;
        }
    }
    return out;
}

GrayImage laplacian_map(const GrayImage& img) { return convolve_same(img, laplacian_kernel()); }

}  // namespace saldl
