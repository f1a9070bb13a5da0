#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "saldl/error.hpp"
#include "saldl/halftone.hpp"
#include "saldl/metrics.hpp"

using namespace saldl;

namespace {

GrayImage random_image(int h, int w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    GrayImage img(h, w);
    for (double& v : img.pixels()) v = u(rng);
    return img;
}

GrayImage shifted(const GrayImage& img, double d) {
    GrayImage out = img;
    for (double& v : out.pixels()) v += d;
    return out;
}

}  // namespace

TEST_CASE("psnr closed forms") {
    const GrayImage a = random_image(8, 8, 1);
    CHECK(std::isinf(psnr(a, a)));
    CHECK(psnr(a, a) > 0);
    CHECK(std::abs(psnr(a, shifted(a, 0.1)) - 20.0) <= 1e-9);
    CHECK(psnr(GrayImage(4, 4, 0.0), GrayImage(4, 4, 0.5)) == doctest::Approx(-20.0 * std::log10(0.5)).epsilon(1e-12));
    CHECK(psnr(GrayImage(4, 4, 0.0), GrayImage(4, 4, 0.5)) == doctest::Approx(6.0206).epsilon(1e-5));
    CHECK_THROWS_AS(psnr(a, GrayImage(8, 9)), DimensionError);
}

TEST_CASE("psnr is scale consistent") {
    const GrayImage a = random_image(10, 10, 2);
    const GrayImage b = random_image(10, 10, 3);
    GrayImage a255 = a;
    GrayImage b255 = b;
    for (double& v : a255.pixels()) v *= 255.0;
    for (double& v : b255.pixels()) v *= 255.0;
    CHECK(std::abs(psnr(a255, b255, 255.0) - psnr(a, b, 1.0)) <= 1e-9);
}

TEST_CASE("color psnr modes") {
    const ColorImage a(GrayImage(4, 4, 0.5), GrayImage(4, 4, 0.5), GrayImage(4, 4, 0.5));
    const ColorImage b(GrayImage(4, 4, 0.6), GrayImage(4, 4, 0.5), GrayImage(4, 4, 0.5));
    // Merged MSE = 0.01 / 3.
    CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(300.0)).epsilon(1e-12));
    CHECK(std::isinf(psnr(a, b, 1.0, ColorPsnr::PlaneAverage)));
}

TEST_CASE("ssim identities") {
    const GrayImage x = random_image(24, 20, 4);
    CHECK(std::abs(ssim(x, x) - 1.0) <= 1e-9);
    const GrayImage y = random_image(24, 20, 5);
    CHECK(std::abs(ssim(x, y) - ssim(y, x)) <= 1e-12);
    const double s = ssim(x, y);
    CHECK(s >= -1.0);
    CHECK(s < 1.0);

    const GrayImage half(16, 16, 0.5);
    GrayImage inverted = half;
    for (double& v : inverted.pixels()) v = 1.0 - v;
    CHECK(ssim(half, inverted) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ssim(GrayImage(10, 30), GrayImage(10, 30)), DimensionError);
    CHECK_THROWS_AS(ssim(x, GrayImage(24, 21)), DimensionError);
}

TEST_CASE("ssim of constants matches the closed form") {
    // Constant windows: variances and covariance vanish, leaving the luminance term.
    const double a = 0.2;
    const double b = 0.6;
    const double c1 = 1e-4;
    const double expected = (2 * a * b + c1) / (a * a + b * b + c1);
    CHECK(ssim(GrayImage(12, 12, a), GrayImage(12, 12, b)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("color ssim defaults to luma") {
    const ColorImage a(random_image(12, 12, 1), random_image(12, 12, 2), random_image(12, 12, 3));
    const ColorImage b(random_image(12, 12, 4), random_image(12, 12, 5), random_image(12, 12, 6));
    CHECK(ssim(a, b) == ssim(to_grayscale(a), to_grayscale(b)));
    double mean = 0.0;
    for (int c = 0; c < 3; ++c) mean += ssim(a.plane(c), b.plane(c));
    CHECK(ssim(a, b, ColorSsim::PlaneAverage) == doctest::Approx(mean / 3.0).epsilon(1e-14));
}

TEST_CASE("residual stats") {
    std::vector<double> vals(200);
    std::iota(vals.begin(), vals.end(), 0.0);
    const GrayImage img(10, 20, vals);
    const auto s = residual_stats(img);
    CHECK(s.min == 0.0);
    CHECK(s.max == 199.0);
    CHECK(s.mean == 99.5);
    // Linear interpolation: q(0.995) = 198.005, q(0.005) = 0.995.
    CHECK(s.width99 == doctest::Approx(198.005 - 0.995).epsilon(1e-12));
    double var = 0.0;
    for (double v : vals) var += (v - 99.5) * (v - 99.5);
    CHECK(s.std == doctest::Approx(std::sqrt(var / 200.0)).epsilon(1e-12));
}

TEST_CASE("residual histogram") {
    const GrayImage original = random_image(20, 24, 7);
    const BitImage half = floyd_steinberg(original);
    const auto r = residual_histogram(original, half, default_gcm_kernel());
    REQUIRE(r.bins() == kDefaultHistogramBins);
    CHECK(r.bin_edges.front() == -1.0);
    CHECK(r.bin_edges.back() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.bin_center(100) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::accumulate(r.additive_counts.begin(), r.additive_counts.end(), 0L) == 480);
    CHECK(std::accumulate(r.gcm_counts.begin(), r.gcm_counts.end(), 0L) == 480);

    const GrayImage bits = half.to_gray();
    const auto zero = residual_histogram(bits, half, default_gcm_kernel());
    CHECK(zero.additive_counts[100] == 480);
    CHECK(zero.gcm_counts[100] == 480);

    std::ostringstream csv;
    write_histogram_csv(csv, zero);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "bin_center,additive_count,gcm_count");
    int rows = 0;
    int stats = 0;
    while (std::getline(lines, line)) {
        if (line.rfind("# stats:", 0) == 0) {
            ++stats;
        } else {
            ++rows;
        }
    }
    CHECK(rows == kDefaultHistogramBins);
    CHECK(stats == 2);
    CHECK_THROWS_AS(residual_histogram(original, BitImage(3, 3), default_gcm_kernel()), DimensionError);
}
