#include "saldl/dataset.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>

#include "saldl/error.hpp"
#include "saldl/halftone.hpp"

namespace saldl {

std::size_t patch_capacity(const GrayImage& img, int patch_size) {
    if (img.height() < patch_size || img.width() < patch_size) return 0;
    return static_cast<std::size_t>(img.height() - patch_size + 1) *
           static_cast<std::size_t>(img.width() - patch_size + 1);
}

std::vector<SampleTriplet> build_dataset(const std::vector<GrayImage>& grayscale,
                                         int patch_size, std::span<const int> patches_per_image,
                                         std::uint64_t seed) {
    if (patch_size < 1) throw InvalidArgument("patch size must be positive");
    if (patches_per_image.size() != grayscale.size()) {
        throw InvalidArgument("one patch count per image is required");
    }
    std::mt19937_64 rng(seed);
    std::vector<SampleTriplet> out;
    for (std::size_t id = 0; id < grayscale.size(); ++id) {
        const GrayImage& img = grayscale[id];
        const int count = patches_per_image[id];
        if (count <= 0) continue;
        const std::size_t capacity = patch_capacity(img, patch_size);
        if (capacity == 0) {
            throw DimensionError("image " + std::to_string(id) + " (" + std::to_string(img.height()) +
                                 "x" + std::to_string(img.width()) + ") is smaller than the " +
                                 std::to_string(patch_size) + "px patch");
        }
        if (static_cast<std::size_t>(count) > capacity) {
            throw InvalidArgument("image " + std::to_string(id) + " has only " +
                                  std::to_string(capacity) + " distinct patch offsets, " +
                                  std::to_string(count) + " requested");
        }
        const GrayImage clipped = clamp01(img);
        const BitImage halftone = floyd_steinberg(clipped);
        const GrayImage laplacian = laplacian_map(clipped);
        const int span_x = img.width() - patch_size + 1;
        std::unordered_set<std::size_t> used;
        while (static_cast<int>(used.size()) < count) {
            const std::size_t pick = rng() % capacity;
            if (!used.insert(pick).second) continue;
            const int y = static_cast<int>(pick / span_x);
            const int x = static_cast<int>(pick % span_x);
            out.push_back({clipped.crop(y, x, patch_size, patch_size),
                           laplacian.crop(y, x, patch_size, patch_size),
                           halftone.crop(y, x, patch_size, patch_size), static_cast<int>(id), y, x});
        }
    }
    return out;
}

std::vector<SampleTriplet> build_dataset(const std::vector<GrayImage>& grayscale,
                                         int patch_size, int patches_per_image,
                                         std::uint64_t seed) {
    std::vector<int> counts(grayscale.size(), patches_per_image);
    return build_dataset(grayscale, patch_size, counts, seed);
}

std::vector<SampleTriplet> build_dataset(const std::vector<ColorImage>& images, int patch_size,
                                         int patches_per_image, std::uint64_t seed) {
    std::vector<GrayImage> gray;
    gray.reserve(images.size());
    for (const auto& c : images) gray.push_back(to_grayscale(c));
    return build_dataset(gray, patch_size, patches_per_image, seed);
}

GrayImage gcm_target(const SampleTriplet& t, const Kernel& gaussian) {
    return convolve_same(additive_residual(t.original, t.halftone), gaussian);
}

GrayImage additive_residual(const GrayImage& original, const BitImage& halftone) {
    return original - halftone.to_gray();
}

}  // namespace saldl
