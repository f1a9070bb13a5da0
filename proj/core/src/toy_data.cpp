#include "saldl/toy_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "saldl/error.hpp"

namespace saldl {

GrayImage toy_image(int size, std::uint64_t seed) {
    if (size < 1) throw InvalidArgument("toy image size must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    GrayImage img(size, size);
    const double a = uniform(0.2, 0.8);
    const double gx = uniform(-0.3, 0.3);
    const double gy = uniform(-0.3, 0.3);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            img.at(y, x) = a + gx * (x / double(size) - 0.5) + gy * (y / double(size) - 0.5);
        }
    }

    const int shapes = 2 + static_cast<int>(rng() % 3);
    for (int s = 0; s < shapes; ++s) {
        const double tone = uniform(0.05, 0.95);
        switch (rng() % 4) {
            case 0: {
                const int y0 = static_cast<int>(uniform(0, size * 0.7));
                const int x0 = static_cast<int>(uniform(0, size * 0.7));
                const int h = static_cast<int>(uniform(size * 0.2, size * 0.5));
                const int w = static_cast<int>(uniform(size * 0.2, size * 0.5));
                for (int y = y0; y < std::min(size, y0 + h); ++y) {
                    for (int x = x0; x < std::min(size, x0 + w); ++x) img.at(y, x) = tone;
                }
                break;
            }
            case 1: {
                const double cy = uniform(0, size);
                const double cx = uniform(0, size);
                const double r = uniform(size * 0.1, size * 0.3);
                for (int y = 0; y < size; ++y) {
                    for (int x = 0; x < size; ++x) {
                        if (std::hypot(y - cy, x - cx) <= r) img.at(y, x) = tone;
                    }
                }
                break;
            }
            case 2: {
                const double period = uniform(4.0, 10.0);
                const double angle = uniform(0.0, std::numbers::pi);
                const double amp = uniform(0.1, 0.25);
                const double c = std::cos(angle);
                const double sn = std::sin(angle);
                const int y0 = static_cast<int>(uniform(0, size * 0.5));
                const int x0 = static_cast<int>(uniform(0, size * 0.5));
                const int y1 = std::min(size, y0 + size / 2);
                const int x1 = std::min(size, x0 + size / 2);
                for (int y = y0; y < y1; ++y) {
                    for (int x = x0; x < x1; ++x) {
                        const double phase = 2.0 * std::numbers::pi * (c * x + sn * y) / period;
                        img.at(y, x) += amp * std::sin(phase);
                    }
                }
                break;
            }
            default: {
                const bool horizontal = rng() % 2 == 0;
                const int pos = static_cast<int>(rng() % static_cast<std::uint64_t>(size));
                for (int t = 0; t < size; ++t) {
                    if (horizontal) {
                        img.at(pos, t) = tone;
                    } else {
                        img.at(t, pos) = tone;
                    }
                }
                break;
            }
        }
    }
    for (double& v : img.pixels()) v = std::clamp(v, 0.0, 1.0);
    return img;
}

std::vector<SampleTriplet> toy_dataset(int count, std::uint64_t seed) {
    if (count < 1) throw InvalidArgument("toy dataset needs at least one sample");
    std::vector<GrayImage> images;
    images.reserve(static_cast<std::size_t>(count));
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) images.push_back(toy_image(kPatchSize, rng()));
    return build_dataset(images, kPatchSize, 1, seed);
}

}  // namespace saldl
