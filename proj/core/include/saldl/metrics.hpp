#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "saldl/filters.hpp"
#include "saldl/image.hpp"

namespace saldl {

/// 10 log10(peak^2 / MSE); +inf when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b, double peak = 1.0);

enum class ColorPsnr { MergedMse, PlaneAverage };
double psnr(const ColorImage& a, const ColorImage& b, double peak = 1.0,
            ColorPsnr mode = ColorPsnr::MergedMse);

/// Mean local SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
/// dynamic range 1, valid window positions only.
double ssim(const GrayImage& a, const GrayImage& b);

enum class ColorSsim { Luma, PlaneAverage };
double ssim(const ColorImage& a, const ColorImage& b, ColorSsim mode = ColorSsim::Luma);

struct ResidualStats {
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
    /// q(0.995) - q(0.005), linear interpolation between order statistics.
    double width99 = 0.0;
};

ResidualStats residual_stats(const GrayImage& residual);

struct HistogramReport {
    std::vector<double> bin_edges;  // bins + 1 values spanning [-1, 1]
    std::vector<long> additive_counts;
    std::vector<long> gcm_counts;
    ResidualStats additive;
    ResidualStats gcm;

    int bins() const noexcept { return static_cast<int>(additive_counts.size()); }
    double bin_center(int i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
};

inline constexpr int kDefaultHistogramBins = 201;

/// Bins the additive residual (original - halftone) and the GCM residual
/// ((original - halftone) convolved with the kernel) over [-1, 1]. Values
/// outside the range land in the end bins.
HistogramReport residual_histogram(const GrayImage& original, const BitImage& halftone,
                                   const Kernel& gaussian, int bins = kDefaultHistogramBins);

/// `bin_center,additive_count,gcm_count` rows followed by `# stats:` lines.
void write_histogram_csv(std::ostream& out, const HistogramReport& report);

}  // namespace saldl
