#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "saldl/image.hpp"

namespace saldl {

// Binary netpbm I/O. P5 (grayscale) is the primary format; P6 is accepted
// for color inputs. Only maxval 255 is supported. Byte p maps to p / 255 on
// load; value v is written as round(clamp(v, 0, 1) * 255), halves rounding up.

GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

ColorImage decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const ColorImage& img);

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

ColorImage load_ppm(const std::filesystem::path& path);
void save_ppm(const ColorImage& img, const std::filesystem::path& path);

using AnyImage = std::variant<GrayImage, ColorImage>;

/// Dispatches on the magic number (P5 or P6).
AnyImage load_pnm(const std::filesystem::path& path);

std::uint8_t quantize_byte(double v) noexcept;

/// Affine map for storing signed layers in [-1, 1] as 8-bit: v' = (v + 1) / 2.
GrayImage encode_signed(const GrayImage& img);
GrayImage decode_signed(const GrayImage& img);

}  // namespace saldl
