#include "saldl/halftone.hpp"

#include <vector>

#include "saldl/error.hpp"

namespace saldl {

BitImage floyd_steinberg(const GrayImage& img) {
    for (double v : img.pixels()) {
        if (!(v >= 0.0 && v <= 1.0)) throw RangeError("halftone input outside [0, 1]");
    }
    const int h = img.height();
    const int w = img.width();
    std::vector<double> work(img.pixels().begin(), img.pixels().end());
    BitImage out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = work[static_cast<std::size_t>(y) * w + x];
            bool on = v >= 0.5;
            out.set(y, x, on);
            double err = v - (on ? 1.0 : 0.0);
            for (const auto& tap : kFloydSteinberg) {
                int ny = y + tap.dy;
                int nx = x + tap.dx;
                if (ny < h && nx >= 0 && nx < w) {
                    work[static_cast<std::size_t>(ny) * w + nx] += err * tap.weight;
                }
            }
        }
    }
    return out;
}

}  // namespace saldl
