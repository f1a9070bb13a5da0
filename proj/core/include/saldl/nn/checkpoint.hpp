#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "saldl/nn/subnet.hpp"

namespace saldl::nn {

// Subnet checkpoint, all integers and floats little-endian:
//
//   offset  size  field
//   0       8     magic "SALDLNN\0"
//   8       4     u32 format version (1)
//   12      4     u32 name length L
//   16      L     name bytes (UTF-8, no terminator)
//   16+L    4     u32 layer count B
//           4     u32 input channels
//           4     u32 hidden channels
//           4     u32 output channels
//           4     u32 flags (bit 0: frozen)
//           8*B   per layer: u32 c (input channels), u32 m (filters)
//   then for each layer in order:
//           4*m*c*25  f32 weights, [m][c][5][5]
//           4*m       f32 bias
//
// Decoding rejects trailing bytes, unknown versions, and per-layer shapes
// that disagree with the spec fields.

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const Subnet<float>& net);
Subnet<float> decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Subnet<float>& net, const std::filesystem::path& path);
Subnet<float> load_checkpoint(const std::filesystem::path& path);

}  // namespace saldl::nn
