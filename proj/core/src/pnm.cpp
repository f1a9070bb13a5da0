#include "saldl/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "saldl/error.hpp"

namespace saldl {

namespace {

struct Header {
    int width = 0;
    int height = 0;
    std::size_t payload_offset = 0;
};

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_int(const char* field) {
        skip_space_and_comments();
        std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000) {
                throw ParseError(ParseErrorKind::MalformedHeader,
                                 std::string("header field too large: ") + field);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw ParseError(ParseErrorKind::MalformedHeader,
                             std::string("missing or non-numeric header field: ") + field);
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the payload.
    void expect_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw ParseError(ParseErrorKind::MalformedHeader,
                             "expected whitespace after maxval");
        }
        ++pos_;
    }

    std::size_t pos() const noexcept { return pos_; }
    void advance(std::size_t n) noexcept { pos_ += n; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

Header parse_header(std::span<const std::uint8_t> bytes, char kind, std::size_t channels) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != static_cast<std::uint8_t>(kind)) {
        throw ParseError(ParseErrorKind::BadMagic,
                         std::string("expected magic P") + kind);
    }
    HeaderReader reader(bytes);
    reader.advance(2);
    Header h;
    h.width = static_cast<int>(reader.read_int("width"));
    h.height = static_cast<int>(reader.read_int("height"));
    long maxval = reader.read_int("maxval");
    if (h.width < 1 || h.height < 1) {
        throw ParseError(ParseErrorKind::MalformedHeader, "zero image dimension");
    }
    if (maxval != 255) {
        throw ParseError(ParseErrorKind::UnsupportedMaxval,
                         "unsupported maxval " + std::to_string(maxval) + " (need 255)");
    }
    reader.expect_single_space();
    h.payload_offset = reader.pos();
    std::size_t need = static_cast<std::size_t>(h.width) * h.height * channels;
    if (bytes.size() - h.payload_offset < need) {
        throw ParseError(ParseErrorKind::TruncatedPayload,
                         "payload has " + std::to_string(bytes.size() - h.payload_offset) +
                             " bytes, expected " + std::to_string(need));
    }
    return h;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::uint8_t> header_bytes(char kind, int width, int height) {
    std::string s = std::string("P") + kind + "\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n255\n";
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

}  // namespace

std::uint8_t quantize_byte(double v) noexcept {
    double c = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    Header h = parse_header(bytes, '5', 1);
    GrayImage img(h.height, h.width);
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = bytes[h.payload_offset + i] / 255.0;
    return img;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    auto out = header_bytes('5', img.width(), img.height());
    out.reserve(out.size() + img.size());
    for (double v : img.pixels()) out.push_back(quantize_byte(v));
    return out;
}

ColorImage decode_ppm(std::span<const std::uint8_t> bytes) {
    Header h = parse_header(bytes, '6', 3);
    GrayImage r(h.height, h.width), g(h.height, h.width), b(h.height, h.width);
    auto pr = r.pixels();
    auto pg = g.pixels();
    auto pb = b.pixels();
    const std::uint8_t* src = bytes.data() + h.payload_offset;
    for (std::size_t i = 0; i < pr.size(); ++i) {
        pr[i] = src[3 * i] / 255.0;
        pg[i] = src[3 * i + 1] / 255.0;
        pb[i] = src[3 * i + 2] / 255.0;
    }
    return ColorImage(std::move(r), std::move(g), std::move(b));
}

std::vector<std::uint8_t> encode_ppm(const ColorImage& img) {
    auto out = header_bytes('6', img.width(), img.height());
    auto pr = img.plane(0).pixels();
    auto pg = img.plane(1).pixels();
    auto pb = img.plane(2).pixels();
    out.reserve(out.size() + 3 * pr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) {
        out.push_back(quantize_byte(pr[i]));
        out.push_back(quantize_byte(pg[i]));
        out.push_back(quantize_byte(pb[i]));
    }
    return out;
}

GrayImage load_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    write_file(path, encode_pgm(img));
}

ColorImage load_ppm(const std::filesystem::path& path) { return decode_ppm(read_file(path)); }

void save_ppm(const ColorImage& img, const std::filesystem::path& path) {
    write_file(path, encode_ppm(img));
}

AnyImage load_pnm(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes);
    return decode_pgm(bytes);
}

GrayImage encode_signed(const GrayImage& img) {
    GrayImage out = img;
    for (double& v : out.pixels()) v = (v + 1.0) * 0.5;
    return out;
}

GrayImage decode_signed(const GrayImage& img) {
    GrayImage out = img;
    for (double& v : out.pixels()) v = 2.0 * v - 1.0;
    return out;
}

}  // namespace saldl
