#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "saldl/filters.hpp"
#include "saldl/image.hpp"

namespace saldl {

inline constexpr int kPatchSize = 32;

/// Aligned patches cut from the same offset of one source image: the
/// grayscale original, its Laplacian map, and its halftone.
struct SampleTriplet {
    GrayImage original;
    GrayImage laplacian;
    BitImage halftone;
    int source_id = 0;
    int y = 0;
    int x = 0;
};

/// Halftones and Laplacian-maps each whole image, then cuts
/// `patches_per_image[i]` patches at distinct uniformly random offsets of
/// image i. Deterministic in `seed`. Throws DimensionError for images smaller
/// than the patch and InvalidArgument when more patches are requested than an
/// image has distinct offsets.
std::vector<SampleTriplet> build_dataset(const std::vector<GrayImage>& grayscale,
                                         int patch_size, std::span<const int> patches_per_image,
                                         std::uint64_t seed);

std::vector<SampleTriplet> build_dataset(const std::vector<GrayImage>& grayscale,
                                         int patch_size, int patches_per_image,
                                         std::uint64_t seed);

/// Color sources are converted to BT.601 luma first.
std::vector<SampleTriplet> build_dataset(const std::vector<ColorImage>& images, int patch_size,
                                         int patches_per_image, std::uint64_t seed);

/// Number of distinct patch offsets in an image.
std::size_t patch_capacity(const GrayImage& img, int patch_size);

/// (original - halftone) convolved with the Gaussian: the base-layer residual target.
GrayImage gcm_target(const SampleTriplet& t, const Kernel& gaussian);

/// original - halftone, the additive-model residual.
GrayImage additive_residual(const GrayImage& original, const BitImage& halftone);

}  // namespace saldl
