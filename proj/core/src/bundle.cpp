#include "saldl/config.hpp"
#include "saldl/error.hpp"
#include "saldl/networks.hpp"
#include "saldl/nn/checkpoint.hpp"

#include <sstream>

namespace saldl {

namespace {

constexpr const char* kManifest = "manifest.txt";
constexpr const char* kFormat = "saldl-bundle-1";

void put_stage(KeyValueFile& kv, const std::string& name, const StageStatus& s) {
    kv.set(name + ".trained", s.trained ? 1L : 0L);
    kv.set(name + ".epochs", static_cast<long>(s.epochs));
}

StageStatus get_stage(const KeyValueFile& kv, const std::string& name) {
    StageStatus s;
    s.trained = kv.get_int(name + ".trained") != 0;
    s.epochs = static_cast<int>(kv.get_int(name + ".epochs"));
    return s;
}

nn::Subnet<float> load_checked(const std::filesystem::path& dir, const std::string& file,
                               const nn::SubnetSpec& expected) {
    auto path = dir / file;
    if (!std::filesystem::exists(path)) throw IoError("bundle is missing " + path.string());
    auto net = nn::load_checkpoint(path);
    if (!(net.spec() == expected)) {
        throw ParseError(ParseErrorKind::MalformedHeader,
                         file + ": architecture does not match bundle manifest");
    }
    return net;
}

}  // namespace

void save_bundle(const ModelBundle& b, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    KeyValueFile kv;
    kv.set("format", kFormat);
    kv.set("seed", std::to_string(b.seed));
    kv.set("arch.hidden_channels", static_cast<long>(b.arch.hidden_channels));
    kv.set("arch.gcm_blocks", static_cast<long>(b.arch.gcm_blocks));
    kv.set("arch.irs_blocks", static_cast<long>(b.arch.irs_blocks));
    kv.set("arch.head_blocks", static_cast<long>(b.arch.head_blocks));
    kv.set("arch.sards_blocks", static_cast<long>(b.arch.sards_blocks));
    kv.set("arch.baseline_blocks", static_cast<long>(b.arch.baseline_blocks));
    kv.set("gaussian.side", static_cast<long>(b.gaussian.side()));
    std::string taps;
    for (double t : b.gaussian.taps()) {
        if (!taps.empty()) taps += ' ';
        taps += format_double(t);
    }
    kv.set("gaussian.taps", taps);
    put_stage(kv, "stage1", b.stage1);
    put_stage(kv, "stage2", b.stage2);
    put_stage(kv, "stage3", b.stage3);
    put_stage(kv, "prl", b.prl_stage);
    put_stage(kv, "ddn", b.ddn_stage);
    kv.set("subnets", std::string("gcm.ckpt irs.ckpt ismp_head.ckpt sards.ckpt") +
                          (b.prl ? " prl.ckpt" : "") + (b.ddn ? " ddn.ckpt" : ""));

    nn::save_checkpoint(b.gcm, dir / "gcm.ckpt");
    nn::save_checkpoint(b.irs, dir / "irs.ckpt");
    nn::save_checkpoint(b.ismp_head, dir / "ismp_head.ckpt");
    nn::save_checkpoint(b.sards, dir / "sards.ckpt");
    if (b.prl) nn::save_checkpoint(*b.prl, dir / "prl.ckpt");
    if (b.ddn) nn::save_checkpoint(*b.ddn, dir / "ddn.ckpt");
    kv.save(dir / kManifest);
}

ModelBundle load_bundle(const std::filesystem::path& dir) {
    auto manifest_path = dir / kManifest;
    if (!std::filesystem::exists(manifest_path)) {
        throw IoError("no bundle manifest at " + manifest_path.string());
    }
    KeyValueFile kv = KeyValueFile::load(manifest_path);
    if (kv.get("format") != kFormat) {
        throw ParseError(ParseErrorKind::BadMagic, "unknown bundle format '" + kv.get("format") + "'");
    }
    ModelBundle b;
    b.seed = std::stoull(kv.get("seed"));
    b.arch.hidden_channels = static_cast<int>(kv.get_int("arch.hidden_channels"));
    b.arch.gcm_blocks = static_cast<int>(kv.get_int("arch.gcm_blocks"));
    b.arch.irs_blocks = static_cast<int>(kv.get_int("arch.irs_blocks"));
    b.arch.head_blocks = static_cast<int>(kv.get_int("arch.head_blocks"));
    b.arch.sards_blocks = static_cast<int>(kv.get_int("arch.sards_blocks"));
    b.arch.baseline_blocks = static_cast<int>(kv.get_int("arch.baseline_blocks"));

    int side = static_cast<int>(kv.get_int("gaussian.side"));
    std::vector<double> taps;
    std::istringstream ts(kv.get("gaussian.taps"));
    for (std::string tok; ts >> tok;) taps.push_back(std::stod(tok));
    b.gaussian = Kernel(side, std::move(taps));

    b.stage1 = get_stage(kv, "stage1");
    b.stage2 = get_stage(kv, "stage2");
    b.stage3 = get_stage(kv, "stage3");
    b.prl_stage = get_stage(kv, "prl");
    b.ddn_stage = get_stage(kv, "ddn");

    b.gcm = load_checked(dir, "gcm.ckpt", gcm_spec(b.arch));
    b.irs = load_checked(dir, "irs.ckpt", irs_spec(b.arch));
    b.ismp_head = load_checked(dir, "ismp_head.ckpt", ismp_head_spec(b.arch));
    b.sards = load_checked(dir, "sards.ckpt", sards_spec(b.arch));
    if (std::filesystem::exists(dir / "prl.ckpt")) {
        b.prl = load_checked(dir, "prl.ckpt", baseline_spec(BaselineKind::PRL, b.arch));
    }
    if (std::filesystem::exists(dir / "ddn.ckpt")) {
        b.ddn = load_checked(dir, "ddn.ckpt", baseline_spec(BaselineKind::DDN, b.arch));
    }
    return b;
}

}  // namespace saldl
