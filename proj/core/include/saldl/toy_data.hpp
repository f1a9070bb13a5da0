#pragma once

#include <cstdint>
#include <vector>

#include "saldl/dataset.hpp"
#include "saldl/image.hpp"

namespace saldl {

/// Seeded synthetic scene in [0, 1]: a smooth gradient background with
/// rectangles, disks, stripes, and thin lines drawn over it.
GrayImage toy_image(int size, std::uint64_t seed);

/// `count` toy scenes of patch size, one triplet each.
std::vector<SampleTriplet> toy_dataset(int count, std::uint64_t seed);

}  // namespace saldl
