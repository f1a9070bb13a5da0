#pragma once

#include <array>

#include "saldl/image.hpp"

namespace saldl {

struct DiffusionTap {
    int dy;
    int dx;
    double weight;
};

/// Floyd-Steinberg weights: right 7/16, down-left 3/16, down 5/16, down-right 1/16.
inline constexpr std::array<DiffusionTap, 4> kFloydSteinberg{{
    {0, 1, 7.0 / 16.0},
    {1, -1, 3.0 / 16.0},
    {1, 0, 5.0 / 16.0},
    {1, 1, 1.0 / 16.0},
}};

/// Error-diffusion halftoning in plain raster order. A pixel becomes 1 when its
/// error-adjusted value is >= 0.5; error pushed past the image border is
/// dropped. Throws RangeError for inputs outside [0, 1].
BitImage floyd_steinberg(const GrayImage& img);

}  // namespace saldl
