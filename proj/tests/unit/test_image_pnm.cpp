#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "saldl/error.hpp"
#include "saldl/image.hpp"
#include "saldl/pnm.hpp"

using namespace saldl;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::vector<std::uint8_t> payload) {
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

ParseErrorKind parse_kind(const std::vector<std::uint8_t>& bytes) {
    try {
        decode_pgm(bytes);
    } catch (const ParseError& e) {
        return e.kind();
    }
    FAIL("decode_pgm accepted malformed input");
    return ParseErrorKind::BadMagic;
}

}  // namespace

TEST_CASE("gray image construction and access") {
    GrayImage img(2, 3, 0.25);
    CHECK(img.height() == 2);
    CHECK(img.width() == 3);
    CHECK(img.size() == 6);
    img.at(1, 2) = 0.75;
    CHECK(img.pixels()[5] == 0.75);
    CHECK_THROWS_AS(GrayImage(0, 3), DimensionError);
    CHECK_THROWS_AS(GrayImage(2, 2, std::vector<double>(3)), DimensionError);

    const GrayImage c = img.crop(1, 1, 1, 2);
    CHECK(c.at(0, 0) == 0.25);
    CHECK(c.at(0, 1) == 0.75);
    CHECK_THROWS_AS(img.crop(1, 2, 2, 2), DimensionError);
}

TEST_CASE("bit image stays bilevel") {
    GrayImage g(1, 3, std::vector<double>{0.0, 1.0, 1.0});
    const BitImage b = BitImage::from_gray(g);
    CHECK(b.at(0, 1) == 1);
    CHECK(b.to_gray() == g);
    g.at(0, 0) = 0.5;
    CHECK_THROWS_AS(BitImage::from_gray(g), RangeError);
    CHECK(is_bilevel(b.to_gray()));
    CHECK_FALSE(is_bilevel(g));
}

TEST_CASE("luma conversion") {
    auto plane = [](double v) { return GrayImage(1, 1, v); };
    CHECK(to_grayscale(ColorImage(plane(1), plane(1), plane(1))).at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(to_grayscale(ColorImage(plane(0), plane(0), plane(0))).at(0, 0) == 0.0);
    CHECK(to_grayscale(ColorImage(plane(1), plane(0), plane(0))).at(0, 0) == doctest::Approx(0.299).epsilon(1e-15));
    CHECK(to_grayscale(ColorImage(plane(0), plane(1), plane(0))).at(0, 0) == doctest::Approx(0.587).epsilon(1e-15));
}

TEST_CASE("split and merge planes") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    std::array<GrayImage, 3> planes{GrayImage(4, 5), GrayImage(4, 5), GrayImage(4, 5)};
    for (auto& p : planes)
        for (double& v : p.pixels()) v = u(rng);
    const ColorImage c(planes[0], planes[1], planes[2]);
    const auto s = split_planes(c);
    CHECK(merge_planes(s[0], s[1], s[2]) == c);

    const ColorImage gray(GrayImage(2, 2, 0.3), GrayImage(2, 2, 0.3), GrayImage(2, 2, 0.3));
    const auto g = split_planes(gray);
    CHECK(g[0] == g[1]);
    CHECK(g[1] == g[2]);

    const ColorImage m = merge_planes(GrayImage(2, 2, 0.1), GrayImage(2, 2, 0.2), GrayImage(2, 2, 0.3));
    CHECK(m.plane(2).at(1, 1) == 0.3);
    CHECK_THROWS_AS(merge_planes(GrayImage(2, 2), GrayImage(2, 3), GrayImage(2, 2)), DimensionError);
}

TEST_CASE("clamp01") {
    const GrayImage img(1, 3, std::vector<double>{-0.1, 0.5, 1.2});
    CHECK(clamp01(img) == GrayImage(1, 3, std::vector<double>{0.0, 0.5, 1.0}));
    const GrayImage in_range(1, 2, std::vector<double>{0.0, 0.7});
    CHECK(clamp01(in_range) == in_range);
    CHECK(clamp01(GrayImage(2, 2, -5.0)) == GrayImage(2, 2, 0.0));
}

TEST_CASE("image arithmetic checks shapes") {
    const GrayImage a(2, 2, 0.5);
    const GrayImage b(2, 2, 0.25);
    CHECK((a - b).at(1, 1) == 0.25);
    CHECK((a + b).at(0, 0) == 0.75);
    CHECK_THROWS_AS(a + GrayImage(2, 3), DimensionError);
}

TEST_CASE("pgm decoding") {
    CHECK(decode_pgm(bytes_of("P5\n1 1\n255\n", {0})).at(0, 0) == 0.0);
    CHECK(decode_pgm(bytes_of("P5\n1 1\n255\n", {255})).at(0, 0) == 1.0);
    const GrayImage two = decode_pgm(bytes_of("P5\n2 1\n255\n", {128, 64}));
    REQUIRE(two.width() == 2);
    CHECK(two.at(0, 0) == 128.0 / 255.0);
    CHECK(two.at(0, 1) == 64.0 / 255.0);
    CHECK(two.at(0, 0) == doctest::Approx(0.50196).epsilon(1e-5));
    CHECK(two.at(0, 1) == doctest::Approx(0.25098).epsilon(1e-5));

    const GrayImage commented = decode_pgm(bytes_of("P5\n# a comment\n1 1\n255\n", {51}));
    CHECK(commented.at(0, 0) == 51.0 / 255.0);
}

TEST_CASE("pgm parse errors are distinct") {
    CHECK(parse_kind(bytes_of("P2\n1 1\n255\n", {0})) == ParseErrorKind::BadMagic);
    CHECK(parse_kind(bytes_of("P5\n1\n", {})) == ParseErrorKind::MalformedHeader);
    CHECK(parse_kind(bytes_of("P5\nx 1\n255\n", {0})) == ParseErrorKind::MalformedHeader);
    CHECK(parse_kind(bytes_of("P5\n1 1\n65535\n", {0, 0})) == ParseErrorKind::UnsupportedMaxval);
    CHECK(parse_kind(bytes_of("P5\n1 1\n15\n", {0})) == ParseErrorKind::UnsupportedMaxval);
    CHECK(parse_kind(bytes_of("P5\n2 2\n255\n", {1, 2, 3})) == ParseErrorKind::TruncatedPayload);
}

TEST_CASE("pgm encoding quantizes with round half up") {
    const auto ones = encode_pgm(GrayImage(2, 2, 1.0));
    const auto halves = encode_pgm(GrayImage(2, 2, 0.5));
    const std::string header = "P5\n2 2\n255\n";
    REQUIRE(ones.size() == header.size() + 4);
    for (std::size_t i = header.size(); i < ones.size(); ++i) {
        CHECK(ones[i] == 255);
        CHECK(halves[i] == 128);
    }
    CHECK(quantize_byte(-0.5) == 0);
    CHECK(quantize_byte(2.0) == 255);
}

TEST_CASE("pgm round trip within half a level") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    GrayImage img(7, 9);
    for (double& v : img.pixels()) v = u(rng);
    const auto path = std::filesystem::temp_directory_path() / "saldl_roundtrip.pgm";
    save_pgm(img, path);
    const GrayImage back = load_pgm(path);
    REQUIRE(back.same_shape(img));
    for (std::size_t i = 0; i < img.size(); ++i) {
        CHECK(std::abs(back.pixels()[i] - img.pixels()[i]) <= 1.0 / 510.0 + 1e-15);
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_pgm(path), IoError);
    CHECK_THROWS_AS(save_pgm(img, "/nonexistent-dir/x.pgm"), IoError);
}

TEST_CASE("ppm and dispatch") {
    const ColorImage c(GrayImage(2, 3, 1.0), GrayImage(2, 3, 0.0), GrayImage(2, 3, 128.0 / 255.0));
    const ColorImage back = decode_ppm(encode_ppm(c));
    CHECK(back == c);
    const auto path = std::filesystem::temp_directory_path() / "saldl_dispatch.ppm";
    save_ppm(c, path);
    CHECK(std::holds_alternative<ColorImage>(load_pnm(path)));
    std::filesystem::remove(path);
    const auto gpath = std::filesystem::temp_directory_path() / "saldl_dispatch.pgm";
    save_pgm(GrayImage(2, 2, 0.0), gpath);
    CHECK(std::holds_alternative<GrayImage>(load_pnm(gpath)));
    std::filesystem::remove(gpath);
}

TEST_CASE("signed encoding is affine") {
    const GrayImage s(1, 3, std::vector<double>{-1.0, 0.0, 1.0});
    const GrayImage e = encode_signed(s);
    CHECK(e == GrayImage(1, 3, std::vector<double>{0.0, 0.5, 1.0}));
    CHECK(decode_signed(e) == s);
}
