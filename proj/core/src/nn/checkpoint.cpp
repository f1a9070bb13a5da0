#include "saldl/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "saldl/error.hpp"

namespace saldl::nn {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'L', 'D', 'L', 'N', 'N', '\0'};

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float f) { u32(std::bit_cast<std::uint32_t>(f)); }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

    void need(std::size_t n) const {
        if (b_.size() - pos_ < n) {
            throw ParseError(ParseErrorKind::TruncatedPayload, "checkpoint truncated");
        }
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::string str(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    bool done() const noexcept { return pos_ == b_.size(); }

private:
    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 0;
};

int checked_int(std::uint32_t v, const char* field) {
    if (v == 0 || v > 1u << 16) {
        throw ParseError(ParseErrorKind::MalformedHeader,
                         std::string("checkpoint field out of range: ") + field);
    }
    return static_cast<int>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Subnet<float>& net) {
    const SubnetSpec& spec = net.spec();
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(spec.name.size()));
    w.bytes(spec.name.data(), spec.name.size());
    w.u32(static_cast<std::uint32_t>(spec.block_count));
    w.u32(static_cast<std::uint32_t>(spec.input_channels));
    w.u32(static_cast<std::uint32_t>(spec.hidden_channels));
    w.u32(static_cast<std::uint32_t>(spec.output_channels));
    w.u32(net.frozen() ? 1u : 0u);
    for (const auto& l : net.layers()) {
        w.u32(static_cast<std::uint32_t>(l.in_channels));
        w.u32(static_cast<std::uint32_t>(l.out_channels));
    }
    for (const auto& l : net.layers()) {
        for (float v : l.weights) w.f32(v);
        for (float v : l.bias) w.f32(v);
    }
    return w.take();
}

Subnet<float> decode_checkpoint(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw ParseError(ParseErrorKind::BadMagic, "not a subnet checkpoint");
    }
    Reader r(bytes.subspan(sizeof kMagic));
    std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) {
        throw ParseError(ParseErrorKind::MalformedHeader,
                         "unsupported checkpoint version " + std::to_string(version));
    }
    std::uint32_t name_len = r.u32();
    if (name_len > 4096) throw ParseError(ParseErrorKind::MalformedHeader, "checkpoint name too long");
    SubnetSpec spec;
    spec.name = r.str(name_len);
    spec.block_count = checked_int(r.u32(), "block count");
    spec.input_channels = checked_int(r.u32(), "input channels");
    spec.hidden_channels = checked_int(r.u32(), "hidden channels");
    spec.output_channels = checked_int(r.u32(), "output channels");
    std::uint32_t flags = r.u32();

    Subnet<float> net(spec);
    net.set_frozen((flags & 1u) != 0);
    for (const auto& l : net.layers()) {
        int c = checked_int(r.u32(), "layer c");
        int m = checked_int(r.u32(), "layer m");
        if (c != l.in_channels || m != l.out_channels) {
            throw ParseError(ParseErrorKind::MalformedHeader,
                             "checkpoint layer shape disagrees with subnet spec");
        }
    }
    for (auto& l : net.layers()) {
        for (float& v : l.weights) v = r.f32();
        for (float& v : l.bias) v = r.f32();
    }
    if (!r.done()) throw ParseError(ParseErrorKind::MalformedHeader, "trailing bytes in checkpoint");
    return net;
}

void save_checkpoint(const Subnet<float>& net, const std::filesystem::path& path) {
    auto bytes = encode_checkpoint(net);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

Subnet<float> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace saldl::nn
