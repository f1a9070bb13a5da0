#include "saldl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "saldl/config.hpp"
#include "saldl/dataset.hpp"
#include "saldl/error.hpp"

namespace saldl {

namespace {

double mse(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

double psnr_from_mse(double m, double peak) {
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / m);
}

void require_same(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b)) throw DimensionError("metric inputs differ in size");
}

void require_same(const ColorImage& a, const ColorImage& b) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw DimensionError("metric inputs differ in size");
    }
}

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

}  // namespace

double psnr(const GrayImage& a, const GrayImage& b, double peak) {
    require_same(a, b);
    return psnr_from_mse(mse(a.pixels(), b.pixels()), peak);
}

double psnr(const ColorImage& a, const ColorImage& b, double peak, ColorPsnr mode) {
    require_same(a, b);
    if (mode == ColorPsnr::PlaneAverage) {
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) sum += psnr(a.plane(c), b.plane(c), peak);
        return sum / 3.0;
    }
    double m = 0.0;
    for (int c = 0; c < 3; ++c) m += mse(a.plane(c).pixels(), b.plane(c).pixels());
    return psnr_from_mse(m / 3.0, peak);
}

double ssim(const GrayImage& a, const GrayImage& b) {
    require_same(a, b);
    constexpr int kWin = 11;
    if (a.height() < kWin || a.width() < kWin) {
        throw DimensionError("ssim needs images of at least 11x11");
    }
    static const Kernel window = gaussian_kernel(1.5, kWin);
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;

    const int oh = a.height() - kWin + 1;
    const int ow = a.width() - kWin + 1;
    double total = 0.0;
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
            for (int u = 0; u < kWin; ++u) {
                for (int v = 0; v < kWin; ++v) {
                    const double w = window.at(u, v);
                    const double pa = a.at(y + u, x + v);
                    const double pb = b.at(y + u, x + v);
                    ma += w * pa;
                    mb += w * pb;
                    saa += w * pa * pa;
                    sbb += w * pb * pb;
                    sab += w * pa * pb;
                }
            }
            const double va = saa - ma * ma;
            const double vb = sbb - mb * mb;
            const double cov = sab - ma * mb;
            total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                     ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    }
    return total / (static_cast<double>(oh) * ow);
}

double ssim(const ColorImage& a, const ColorImage& b, ColorSsim mode) {
    require_same(a, b);
    if (mode == ColorSsim::Luma) return ssim(to_grayscale(a), to_grayscale(b));
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) sum += ssim(a.plane(c), b.plane(c));
    return sum / 3.0;
}

ResidualStats residual_stats(const GrayImage& residual) {
    auto px = residual.pixels();
    if (px.empty()) throw InvalidArgument("residual is empty");
    ResidualStats s;
    double sum = 0.0;
    for (double v : px) sum += v;
    s.mean = sum / static_cast<double>(px.size());
    double var = 0.0;
    for (double v : px) var += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(var / static_cast<double>(px.size()));
    std::vector<double> sorted(px.begin(), px.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.width99 = quantile(sorted, 0.995) - quantile(sorted, 0.005);
    return s;
}

HistogramReport residual_histogram(const GrayImage& original, const BitImage& halftone,
                                   const Kernel& gaussian, int bins) {
    if (original.height() != halftone.height() || original.width() != halftone.width()) {
        throw DimensionError("original and halftone differ in size");
    }
    if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
    const GrayImage additive = additive_residual(original, halftone);
    const GrayImage gcm = convolve_same(additive, gaussian);

    HistogramReport r;
    const double width = 2.0 / bins;
    r.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) r.bin_edges[static_cast<std::size_t>(i)] = -1.0 + width * i;
    r.additive_counts.assign(static_cast<std::size_t>(bins), 0);
    r.gcm_counts.assign(static_cast<std::size_t>(bins), 0);
    auto bin_of = [&](double v) {
        const auto i = static_cast<long>(std::floor((v + 1.0) / width));
        return static_cast<std::size_t>(std::clamp<long>(i, 0, bins - 1));
    };
    for (double v : additive.pixels()) ++r.additive_counts[bin_of(v)];
    for (double v : gcm.pixels()) ++r.gcm_counts[bin_of(v)];
    r.additive = residual_stats(additive);
    r.gcm = residual_stats(gcm);
    return r;
}

void write_histogram_csv(std::ostream& out, const HistogramReport& report) {
    out << "bin_center,additive_count,gcm_count\n";
    for (int i = 0; i < report.bins(); ++i) {
        out << format_double(report.bin_center(i)) << ',' << report.additive_counts[static_cast<std::size_t>(i)]
            << ',' << report.gcm_counts[static_cast<std::size_t>(i)] << '\n';
    }
    auto stats = [&](const char* name, const ResidualStats& s) {
        out << "# stats: " << name << " std=" << format_double(s.std) << " min=" << format_double(s.min)
            << " max=" << format_double(s.max) << " width99=" << format_double(s.width99) << '\n';
    };
    stats("additive", report.additive);
    stats("gcm", report.gcm);
}

}  // namespace saldl
