#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace saldl {

class BitImage;

/// Row-major H x W raster of doubles. Continuous-tone images live in [0, 1];
/// residual, detail, and Laplacian layers use the same container and may be
/// signed.
class GrayImage {
public:
    GrayImage(int height, int width, double fill = 0.0);
    GrayImage(int height, int width, std::vector<double> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& at(int y, int x) { return data_[index(y, x)]; }
    double at(int y, int x) const { return data_[index(y, x)]; }

    std::span<double> pixels() & noexcept { return data_; }
    std::span<const double> pixels() const& noexcept { return data_; }
    /// Temporaries hand over their storage so range-for stays valid.
    std::vector<double> pixels() && noexcept { return std::move(data_); }

    bool same_shape(const GrayImage& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    GrayImage crop(int y, int x, int height, int width) const;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int y, int x) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int height_;
    int width_;
    std::vector<double> data_;
};

/// Bilevel raster; every value is exactly 0 or 1.
class BitImage {
public:
    BitImage(int height, int width, std::uint8_t fill = 0);
    BitImage(int height, int width, std::vector<std::uint8_t> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::uint8_t at(int y, int x) const {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }
    void set(int y, int x, bool on) {
        data_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0;
    }

    std::span<const std::uint8_t> bits() const& noexcept { return data_; }
    std::vector<std::uint8_t> bits() && noexcept { return std::move(data_); }

    BitImage crop(int y, int x, int height, int width) const;

    GrayImage to_gray() const;

    /// Fails with RangeError unless every pixel is exactly 0.0 or 1.0.
    static BitImage from_gray(const GrayImage& img);

    friend bool operator==(const BitImage&, const BitImage&) = default;

private:
    int height_;
    int width_;
    std::vector<std::uint8_t> data_;
};

/// Three planes (R, G, B) of identical dimensions.
class ColorImage {
public:
    ColorImage(GrayImage r, GrayImage g, GrayImage b);

    int height() const noexcept { return planes_[0].height(); }
    int width() const noexcept { return planes_[0].width(); }

    const GrayImage& plane(int c) const { return planes_.at(c); }
    const std::array<GrayImage, 3>& planes() const noexcept { return planes_; }

    friend bool operator==(const ColorImage&, const ColorImage&) = default;

private:
    std::array<GrayImage, 3> planes_;
};

/// BT.601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage to_grayscale(const ColorImage& c);

std::array<GrayImage, 3> split_planes(const ColorImage& c);
ColorImage merge_planes(const GrayImage& r, const GrayImage& g, const GrayImage& b);

GrayImage clamp01(const GrayImage& img);

GrayImage operator+(const GrayImage& a, const GrayImage& b);
GrayImage operator-(const GrayImage& a, const GrayImage& b);

bool is_bilevel(const GrayImage& img) noexcept;

}  // namespace saldl
