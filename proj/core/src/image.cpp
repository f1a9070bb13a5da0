#include "saldl/image.hpp"

#include <algorithm>
#include <string>

#include "saldl/error.hpp"

namespace saldl {

namespace {

void check_dims(int height, int width) {
    if (height < 1 || width < 1) {
        throw DimensionError("image dimensions must be positive, got " +
                             std::to_string(height) + "x" + std::to_string(width));
    }
}

void check_crop(int img_h, int img_w, int y, int x, int h, int w) {
    if (y < 0 || x < 0 || h < 1 || w < 1 || y + h > img_h || x + w > img_w) {
        throw DimensionError("crop window out of bounds");
    }
}

}  // namespace

GrayImage::GrayImage(int height, int width, double fill)
    : height_(height), width_(width) {
    check_dims(height, width);
    data_.assign(static_cast<std::size_t>(height) * width, fill);
}

GrayImage::GrayImage(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * width) {
        throw DimensionError("pixel count does not match dimensions");
    }
}

GrayImage GrayImage::crop(int y, int x, int height, int width) const {
    check_crop(height_, width_, y, x, height, width);
    GrayImage out(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) out.at(r, c) = at(y + r, x + c);
    }
    return out;
}

BitImage::BitImage(int height, int width, std::uint8_t fill)
    : height_(height), width_(width) {
    check_dims(height, width);
    if (fill > 1) throw RangeError("bit image fill must be 0 or 1");
    data_.assign(static_cast<std::size_t>(height) * width, fill);
}

BitImage::BitImage(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * width) {
        throw DimensionError("pixel count does not match dimensions");
    }
    if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
        throw RangeError("bit image values must be 0 or 1");
    }
}

BitImage BitImage::crop(int y, int x, int height, int width) const {
    check_crop(height_, width_, y, x, height, width);
    BitImage out(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) out.set(r, c, at(y + r, x + c) != 0);
    }
    return out;
}

GrayImage BitImage::to_gray() const {
    std::vector<double> v(data_.begin(), data_.end());
    return GrayImage(height_, width_, std::move(v));
}

BitImage BitImage::from_gray(const GrayImage& img) {
    if (!is_bilevel(img)) throw RangeError("image is not bilevel");
    std::vector<std::uint8_t> bits(img.size());
    auto px = img.pixels();
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = px[i] == 1.0 ? 1 : 0;
    return BitImage(img.height(), img.width(), std::move(bits));
}

ColorImage::ColorImage(GrayImage r, GrayImage g, GrayImage b)
    : planes_{std::move(r), std::move(g), std::move(b)} {
    if (!planes_[0].same_shape(planes_[1]) || !planes_[0].same_shape(planes_[2])) {
        throw DimensionError("color planes must share dimensions");
    }
}

GrayImage to_grayscale(const ColorImage& c) {
    GrayImage out(c.height(), c.width());
    auto r = c.plane(0).pixels();
    auto g = c.plane(1).pixels();
    auto b = c.plane(2).pixels();
    auto o = out.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
    }
    return out;
}

std::array<GrayImage, 3> split_planes(const ColorImage& c) { return c.planes(); }

ColorImage merge_planes(const GrayImage& r, const GrayImage& g, const GrayImage& b) {
    return ColorImage(r, g, b);
}

GrayImage clamp01(const GrayImage& img) {
    GrayImage out = img;
    for (double& v : out.pixels()) v = std::clamp(v, 0.0, 1.0);
    return out;
}

GrayImage operator+(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b)) throw DimensionError("image sizes differ");
    GrayImage out = a;
    auto o = out.pixels();
    auto q = b.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += q[i];
    return out;
}

GrayImage operator-(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b)) throw DimensionError("image sizes differ");
    GrayImage out = a;
    auto o = out.pixels();
    auto q = b.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= q[i];
    return out;
}

bool is_bilevel(const GrayImage& img) noexcept {
    return std::all_of(img.pixels().begin(), img.pixels().end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
}

}  // namespace saldl
