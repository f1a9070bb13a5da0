#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "saldl/error.hpp"
#include "saldl/filters.hpp"
#include "saldl/halftone.hpp"

using namespace saldl;

namespace {

GrayImage random_image(int h, int w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    GrayImage img(h, w);
    for (double& v : img.pixels()) v = u(rng);
    return img;
}

// Reference: direct sum over the kernel with clamped source coordinates.
GrayImage reference_convolve(const GrayImage& img, const Kernel& k) {
    const int r = k.radius();
    GrayImage out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const int sy = std::clamp(y - dy, 0, img.height() - 1);
                    const int sx = std::clamp(x - dx, 0, img.width() - 1);
                    acc += k.at(dy + r, dx + r) * img.at(sy, sx);
                }
            }
            out.at(y, x) = acc;
        }
    }
    return out;
}

// Reference error diffusion with an explicit padded error buffer.
std::vector<int> reference_diffusion(const GrayImage& img) {
    const int h = img.height();
    const int w = img.width();
    std::vector<double> buf(static_cast<std::size_t>((h + 1) * (w + 2)), 0.0);
    auto cell = [&](int y, int x) -> double& { return buf[static_cast<std::size_t>(y * (w + 2) + x + 1)]; };
    std::vector<int> out(static_cast<std::size_t>(h * w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = img.at(y, x) + cell(y, x);
            const int q = v >= 0.5 ? 1 : 0;
            out[static_cast<std::size_t>(y * w + x)] = q;
            const double e = v - q;
            if (x + 1 < w) cell(y, x + 1) += e * 7 / 16;
            if (y + 1 < h) {
                if (x > 0) cell(y + 1, x - 1) += e * 3 / 16;
                cell(y + 1, x) += e * 5 / 16;
                if (x + 1 < w) cell(y + 1, x + 1) += e * 1 / 16;
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("gaussian kernel normalization and symmetry") {
    for (double sigma : {0.5, 1.0, 2.0}) {
        for (int side : {3, 5, 7}) {
            const Kernel k = gaussian_kernel(sigma, side);
            double sum = 0.0;
            for (double t : k.taps()) sum += t;
            CHECK(std::abs(sum - 1.0) <= 1e-12);
            const int n = side - 1;
            for (int i = 0; i < side; ++i) {
                for (int j = 0; j < side; ++j) {
                    CHECK(k.at(i, j) == k.at(j, i));
                    CHECK(k.at(i, j) == k.at(n - i, j));
                    CHECK(k.at(i, j) == k.at(i, n - j));
                }
            }
            for (int i = 1; i <= side / 2; ++i) CHECK(k.at(side / 2, side / 2 + i) < k.at(side / 2, side / 2 + i - 1));
        }
    }
}

TEST_CASE("default gaussian center tap") {
    double total = 0.0;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) total += std::exp(-(i * i + j * j) / 2.0);
    const Kernel k = default_gcm_kernel();
    CHECK(k.side() == 5);
    CHECK(k.at(2, 2) == doctest::Approx(1.0 / total).epsilon(1e-14));
    CHECK(k.at(2, 2) == doctest::Approx(0.16210).epsilon(1e-4));
}

TEST_CASE("kernel argument validation") {
    CHECK_THROWS_AS(gaussian_kernel(1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(gaussian_kernel(0.0, 5), InvalidArgument);
    CHECK_THROWS_AS(gaussian_kernel(-1.0, 5), InvalidArgument);
    CHECK_THROWS_AS(Kernel(2, std::vector<double>(4)), InvalidArgument);
}

TEST_CASE("convolution matches a direct reference") {
    const Kernel k = default_gcm_kernel();
    const GrayImage img = random_image(9, 13, 5);
    const GrayImage a = convolve_same(img, k);
    const GrayImage b = reference_convolve(img, k);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.pixels()[i] == doctest::Approx(b.pixels()[i]).epsilon(1e-14));
}

TEST_CASE("convolution examples") {
    const Kernel g = default_gcm_kernel();
    GrayImage delta(9, 9, 0.0);
    delta.at(4, 4) = 1.0;
    const GrayImage resp = convolve_same(delta, g);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(resp.at(2 + i, 2 + j) == g.at(i, j));

    const GrayImage flat = convolve_same(GrayImage(6, 7, 0.37), g);
    for (double v : flat.pixels()) CHECK(v == doctest::Approx(0.37).epsilon(1e-14));

    const Kernel box(3, std::vector<double>(9, 1.0 / 9.0));
    const GrayImage nine(3, 3, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(convolve_same(nine, box).at(1, 1) == doctest::Approx(5.0).epsilon(1e-14));

    CHECK_THROWS_AS(convolve_same(GrayImage(3, 3), g), DimensionError);
}

TEST_CASE("convolution is linear") {
    const Kernel g = default_gcm_kernel();
    const GrayImage x = random_image(8, 8, 1);
    const GrayImage y = random_image(8, 8, 2);
    GrayImage mix(8, 8);
    for (std::size_t i = 0; i < mix.size(); ++i) mix.pixels()[i] = 2.0 * x.pixels()[i] - 0.5 * y.pixels()[i];
    const GrayImage lhs = convolve_same(mix, g);
    const GrayImage cx = convolve_same(x, g);
    const GrayImage cy = convolve_same(y, g);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        CHECK(std::abs(lhs.pixels()[i] - (2.0 * cx.pixels()[i] - 0.5 * cy.pixels()[i])) <= 1e-12);
    }
}

TEST_CASE("laplacian map") {
    for (double v : laplacian_map(GrayImage(5, 5, 0.6)).pixels()) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));

    GrayImage delta(3, 3, 0.0);
    delta.at(1, 1) = 1.0;
    const GrayImage l = laplacian_map(delta);
    CHECK(l.at(1, 1) == -4.0);
    CHECK(l.at(0, 1) == 1.0);
    CHECK(l.at(1, 0) == 1.0);
    CHECK(l.at(1, 2) == 1.0);
    CHECK(l.at(2, 1) == 1.0);

    // 0 | 1 step between columns 1 and 2.
    const GrayImage step(3, 4, std::vector<double>{0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1});
    const GrayImage ls = laplacian_map(step);
    for (int y = 0; y < 3; ++y) {
        CHECK(ls.at(y, 0) == 0.0);
        CHECK(ls.at(y, 1) == 1.0);
        CHECK(ls.at(y, 2) == -1.0);
        CHECK(ls.at(y, 3) == 0.0);
    }
}

TEST_CASE("floyd steinberg weights") {
    double sum = 0.0;
    for (const auto& t : kFloydSteinberg) sum += t.weight;
    CHECK(sum == 1.0);
}

TEST_CASE("floyd steinberg hand traces") {
    const BitImage row = floyd_steinberg(GrayImage(1, 4, 0.5));
    CHECK(row.at(0, 0) == 1);
    CHECK(row.at(0, 1) == 0);
    CHECK(row.at(0, 2) == 1);
    CHECK(row.at(0, 3) == 0);

    // 2x2 of 0.5: (0,1) -> 0.28125, (1,0) -> 0.396484375, (1,1) -> 0.7301025390625.
    const BitImage sq = floyd_steinberg(GrayImage(2, 2, 0.5));
    CHECK(sq.at(0, 0) == 1);
    CHECK(sq.at(0, 1) == 0);
    CHECK(sq.at(1, 0) == 0);
    CHECK(sq.at(1, 1) == 1);
}

TEST_CASE("floyd steinberg matches reference diffusion") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GrayImage img = random_image(17, 23, seed);
        const BitImage out = floyd_steinberg(img);
        const auto ref = reference_diffusion(img);
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) CHECK(out.at(y, x) == ref[static_cast<std::size_t>(y * 23 + x)]);
    }
}

TEST_CASE("floyd steinberg properties") {
    const BitImage zeros = floyd_steinberg(GrayImage(6, 6, 0.0));
    const BitImage ones = floyd_steinberg(GrayImage(6, 6, 1.0));
    for (auto b : zeros.bits()) CHECK(b == 0);
    for (auto b : ones.bits()) CHECK(b == 1);

    const BitImage half = floyd_steinberg(GrayImage(64, 64, 0.5));
    double mean = 0.0;
    for (auto b : half.bits()) mean += b;
    mean /= 64.0 * 64.0;
    CHECK(std::abs(mean - 0.5) <= 0.02);

    const GrayImage img = random_image(20, 20, 9);
    const BitImage once = floyd_steinberg(img);
    CHECK(floyd_steinberg(once.to_gray()) == once);
    CHECK(floyd_steinberg(img) == once);

    GrayImage bad(2, 2, 0.5);
    bad.at(1, 1) = 1.5;
    CHECK_THROWS_AS(floyd_steinberg(bad), RangeError);
}
