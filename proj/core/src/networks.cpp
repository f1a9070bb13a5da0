#include "saldl/networks.hpp"

#include "saldl/error.hpp"

namespace saldl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

nn::Tensor4f run(const nn::Subnet<float>& net, const nn::Tensor4f& x) { return net.forward(x); }

void require(const StageStatus& s, const char* what) {
    if (!s.trained) throw UntrainedError(std::string(what) + " has not been trained");
}

void check_same(const GrayImage& a, const GrayImage& b, const char* what) {
    if (!a.same_shape(b)) throw DimensionError(std::string(what) + ": image sizes differ");
}

}  // namespace

std::string to_string(BaselineKind kind) { return kind == BaselineKind::DDN ? "ddn" : "prl"; }

BaselineKind parse_baseline_kind(const std::string& name) {
    if (name == "ddn" || name == "DDN") return BaselineKind::DDN;
    if (name == "prl" || name == "PRL") return BaselineKind::PRL;
    throw InvalidArgument("unknown baseline kind '" + name + "'");
}

nn::SubnetSpec gcm_spec(const ArchConfig& a) { return {"gcm", a.gcm_blocks, 1, a.hidden_channels, 1}; }
nn::SubnetSpec irs_spec(const ArchConfig& a) { return {"irs", a.irs_blocks, 1, a.hidden_channels, 1}; }
nn::SubnetSpec ismp_head_spec(const ArchConfig& a) {
    return {"ismp_head", a.head_blocks, 1, a.hidden_channels, 1};
}
nn::SubnetSpec sards_spec(const ArchConfig& a) { return {"sards", a.sards_blocks, 3, a.hidden_channels, 1}; }

nn::SubnetSpec baseline_spec(BaselineKind kind, const ArchConfig& a) {
    return {to_string(kind), a.baseline_blocks, 2, a.hidden_channels, 1};
}

nn::Subnet<float> build_subnet(const nn::SubnetSpec& spec, std::uint64_t seed) {
    spec.validate();
    return nn::Subnet<float>::initialized(spec, seed);
}

nn::Subnet<float> build_baseline(BaselineKind kind, const ArchConfig& arch, std::uint64_t seed) {
    return build_subnet(baseline_spec(kind, arch), derive_seed(seed, kind == BaselineKind::DDN ? 6 : 5));
}

ModelBundle ModelBundle::create(const ArchConfig& arch, std::uint64_t seed) {
    ModelBundle b;
    b.arch = arch;
    b.seed = seed;
    b.gcm = build_subnet(gcm_spec(arch), derive_seed(seed, 1));
    b.irs = build_subnet(irs_spec(arch), derive_seed(seed, 2));
    b.ismp_head = build_subnet(ismp_head_spec(arch), derive_seed(seed, 3));
    b.sards = build_subnet(sards_spec(arch), derive_seed(seed, 4));
    return b;
}

nn::Subnet<float>& ModelBundle::baseline(BaselineKind kind) {
    auto& slot = kind == BaselineKind::DDN ? ddn : prl;
    if (!slot) slot = build_baseline(kind, arch, seed);
    return *slot;
}

const nn::Subnet<float>& ModelBundle::baseline(BaselineKind kind) const {
    const auto& slot = kind == BaselineKind::DDN ? ddn : prl;
    if (!slot) throw UntrainedError(to_string(kind) + " baseline is not present in the bundle");
    return *slot;
}

StageStatus& ModelBundle::baseline_status(BaselineKind kind) {
    return kind == BaselineKind::DDN ? ddn_stage : prl_stage;
}

const StageStatus& ModelBundle::baseline_status(BaselineKind kind) const {
    return kind == BaselineKind::DDN ? ddn_stage : prl_stage;
}

nn::Tensor4f to_tensor(const GrayImage& img) {
    nn::Tensor4f t(1, 1, img.height(), img.width());
    auto src = img.pixels();
    auto dst = t.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>(src[i]);
    return t;
}

GrayImage from_tensor(const nn::Tensor4f& t, int n, int c) {
    auto plane = t.plane(n, c);
    return GrayImage(t.h(), t.w(), std::vector<double>(plane.begin(), plane.end()));
}

BaseLayers predict_base(const GrayImage& halftone, const ModelBundle& bundle) {
    require(bundle.stage1, "GCM residual subnet");
    GrayImage blurred = convolve_same(halftone, bundle.gaussian);
    GrayImage residual = from_tensor(run(bundle.gcm, to_tensor(blurred)));
    GrayImage base = blurred + residual;
    return {std::move(blurred), std::move(residual), std::move(base)};
}

StructureMap predict_structure_map(const GrayImage& halftone, const ModelBundle& bundle) {
    require(bundle.stage3, "ISMP");
    nn::Tensor4f initial = run(bundle.irs, to_tensor(halftone));
    nn::Tensor4f lap = run(bundle.ismp_head, initial);
    return {from_tensor(lap), from_tensor(initial)};
}

GrayImage predict_detail(const GrayImage& base, const GrayImage& laplacian,
                         const GrayImage& halftone, const ModelBundle& bundle) {
    require(bundle.stage3, "SARDS");
    check_same(base, laplacian, "predict_detail");
    check_same(base, halftone, "predict_detail");
    nn::Tensor4f tb = to_tensor(base);
    nn::Tensor4f tl = to_tensor(laplacian);
    nn::Tensor4f th = to_tensor(halftone);
    nn::Tensor4f x = nn::concat_channels<float>({&tb, &tl, &th});
    return from_tensor(run(bundle.sards, x));
}

Decomposition decompose(const GrayImage& halftone, const ModelBundle& bundle) {
    BaseLayers base = predict_base(halftone, bundle);
    StructureMap structure = predict_structure_map(halftone, bundle);
    GrayImage detail = predict_detail(base.base, structure.laplacian, halftone, bundle);
    GrayImage output = clamp01(base.base + detail);
    return {std::move(base), std::move(structure), std::move(detail), std::move(output)};
}

GrayImage reconstruct(const GrayImage& halftone, const ModelBundle& bundle) {
    return decompose(halftone, bundle).output;
}

ColorImage reconstruct(const ColorImage& halftone, const ModelBundle& bundle) {
    auto planes = split_planes(halftone);
    return merge_planes(reconstruct(planes[0], bundle), reconstruct(planes[1], bundle),
                        reconstruct(planes[2], bundle));
}

GrayImage reconstruct_baseline(BaselineKind kind, const GrayImage& halftone,
                               const ModelBundle& bundle) {
    require(bundle.baseline_status(kind), kind == BaselineKind::DDN ? "DDN baseline" : "PRL baseline");
    const auto& net = bundle.baseline(kind);
    GrayImage base = predict_base(halftone, bundle).base;
    nn::Tensor4f tb = to_tensor(base);
    nn::Tensor4f th = to_tensor(halftone);
    GrayImage out = from_tensor(run(net, nn::concat_channels<float>({&tb, &th})));
    if (kind == BaselineKind::PRL) out = base + out;
    return clamp01(out);
}

}  // namespace saldl
