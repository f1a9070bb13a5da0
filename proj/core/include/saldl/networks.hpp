#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "saldl/filters.hpp"
#include "saldl/image.hpp"
#include "saldl/nn/subnet.hpp"

namespace saldl {

/// Depth and width of the subnetworks. `full()` is the full-size layout
/// (16-block GCM/IRS/SARDS, 6-block ISMP head, 64 channels); `desk()` is the
/// small configuration used for CPU smoke training.
struct ArchConfig {
    int hidden_channels = 64;
    int gcm_blocks = 16;
    int irs_blocks = 16;
    int head_blocks = 6;
    int sards_blocks = 16;
    int baseline_blocks = 16;

    static ArchConfig full() { return {}; }
    static ArchConfig desk() { return {16, 3, 3, 3, 3, 3}; }

    friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

enum class BaselineKind { DDN, PRL };

std::string to_string(BaselineKind kind);
BaselineKind parse_baseline_kind(const std::string& name);

nn::SubnetSpec gcm_spec(const ArchConfig& arch);
nn::SubnetSpec irs_spec(const ArchConfig& arch);
nn::SubnetSpec ismp_head_spec(const ArchConfig& arch);
nn::SubnetSpec sards_spec(const ArchConfig& arch);
/// Both baselines take (base, halftone); DDN emits the image, PRL a residual.
nn::SubnetSpec baseline_spec(BaselineKind kind, const ArchConfig& arch);

/// Seeded initialization of a subnet from its spec.
nn::Subnet<float> build_subnet(const nn::SubnetSpec& spec, std::uint64_t seed);
nn::Subnet<float> build_baseline(BaselineKind kind, const ArchConfig& arch, std::uint64_t seed);

struct StageStatus {
    bool trained = false;
    int epochs = 0;
};

/// All trained state needed for inference: the four subnetworks of the
/// layer-decomposition pipeline, optional baselines, and the frozen Gaussian.
struct ModelBundle {
    ArchConfig arch;
    Kernel gaussian = default_gcm_kernel();
    std::uint64_t seed = 0;

    nn::Subnet<float> gcm;
    nn::Subnet<float> irs;
    nn::Subnet<float> ismp_head;
    nn::Subnet<float> sards;
    std::optional<nn::Subnet<float>> prl;
    std::optional<nn::Subnet<float>> ddn;

    StageStatus stage1;  // GCM residual subnet
    StageStatus stage2;  // IRS pretraining
    StageStatus stage3;  // joint IRS + ISMP head + SARDS
    StageStatus prl_stage;
    StageStatus ddn_stage;

    static ModelBundle create(const ArchConfig& arch, std::uint64_t seed);

    nn::Subnet<float>& baseline(BaselineKind kind);
    const nn::Subnet<float>& baseline(BaselineKind kind) const;
    StageStatus& baseline_status(BaselineKind kind);
    const StageStatus& baseline_status(BaselineKind kind) const;
};

// Bundle directory layout: manifest.txt (key = value) plus one subnet
// checkpoint per network (gcm.ckpt, irs.ckpt, ismp_head.ckpt, sards.ckpt,
// and prl.ckpt / ddn.ckpt when present).
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& dir);
ModelBundle load_bundle(const std::filesystem::path& dir);

nn::Tensor4f to_tensor(const GrayImage& img);
GrayImage from_tensor(const nn::Tensor4f& t, int n = 0, int c = 0);

struct BaseLayers {
    GrayImage blurred;   // halftone convolved with the Gaussian
    GrayImage residual;  // GCM subnet output
    GrayImage base;      // blurred + residual, unclamped
};

struct StructureMap {
    GrayImage laplacian;
    GrayImage initial_reconstruction;
};

struct Decomposition {
    BaseLayers base;
    StructureMap structure;
    GrayImage detail;
    GrayImage output;  // clamp01(base + detail)
};

BaseLayers predict_base(const GrayImage& halftone, const ModelBundle& bundle);
StructureMap predict_structure_map(const GrayImage& halftone, const ModelBundle& bundle);
/// SARDS input channels are stacked in the order (base, laplacian, halftone).
GrayImage predict_detail(const GrayImage& base, const GrayImage& laplacian,
                         const GrayImage& halftone, const ModelBundle& bundle);

Decomposition decompose(const GrayImage& halftone, const ModelBundle& bundle);
GrayImage reconstruct(const GrayImage& halftone, const ModelBundle& bundle);
/// Each plane is reconstructed independently (and clamped) before merging.
ColorImage reconstruct(const ColorImage& halftone, const ModelBundle& bundle);

/// DDN: clamp01(net(base, halftone)). PRL: clamp01(base + net(base, halftone)).
GrayImage reconstruct_baseline(BaselineKind kind, const GrayImage& halftone,
                               const ModelBundle& bundle);

}  // namespace saldl
