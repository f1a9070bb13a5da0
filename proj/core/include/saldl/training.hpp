#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saldl/config.hpp"
#include "saldl/dataset.hpp"
#include "saldl/networks.hpp"
#include "saldl/nn/tensor.hpp"
#include "saldl/objectives.hpp"

namespace saldl {

struct TrainConfig {
    int stage = 1;
    int epochs = 200;
    int iters_per_epoch = 1000;
    int batch_size = 64;
    double lr_start = 1e-5;
    double lr_end = 1e-6;
    int lr_step_epochs = 50;
    double momentum = 0.0;
    double omega_detail = 1.0;
    double omega_laplacian = 1.0;
    std::uint64_t seed = 0;

    /// Full protocol: 200 epochs x 1000 iterations, batch 64,
    /// 1e-5 -> 1e-6 in 50-epoch steps, plain SGD.
    static TrainConfig full() { return {}; }
    /// CPU smoke scale used by tests (about 2k iterations per stage). The
    /// step size depends on the stage because the loss magnitudes differ.
    static TrainConfig desk(int stage = 1);

    void validate() const;

    /// Reads the keys listed by keys(); missing keys keep `base` values and
    /// other keys are ignored.
    static TrainConfig from_keyvalue(const KeyValueFile& kv, TrainConfig base);
    static TrainConfig from_keyvalue(const KeyValueFile& kv) { return from_keyvalue(kv, TrainConfig{}); }
    static const std::vector<std::string>& keys();
    KeyValueFile to_keyvalue() const;
};

/// Staircase decay: lr_start - (lr_start - lr_end) * floor(e / step) /
/// (epochs / step - 1), never below lr_end.
double lr_schedule(int epoch, const TrainConfig& cfg);

/// Triplets pre-converted to float tensors (N x 1 x P x P) for batching.
class TrainingData {
public:
    TrainingData(const std::vector<SampleTriplet>& triplets, const Kernel& gaussian);

    std::size_t size() const noexcept { return static_cast<std::size_t>(original_.n()); }

    const nn::Tensor4f& original() const noexcept { return original_; }
    const nn::Tensor4f& laplacian() const noexcept { return laplacian_; }
    const nn::Tensor4f& halftone() const noexcept { return halftone_; }
    const nn::Tensor4f& blurred_halftone() const noexcept { return blurred_; }
    const nn::Tensor4f& gcm_target() const noexcept { return gcm_target_; }

private:
    nn::Tensor4f original_;
    nn::Tensor4f laplacian_;
    nn::Tensor4f halftone_;
    nn::Tensor4f blurred_;
    nn::Tensor4f gcm_target_;
};

/// Copies the listed samples of `source` into a new batch tensor.
nn::Tensor4f gather(const nn::Tensor4f& source, std::span<const std::size_t> indices);

struct EpochRecord {
    int epoch = 0;
    long iter = 0;  // cumulative iterations at the end of the epoch
    std::string stage;
    double loss_total = 0.0;
    double loss_detail = 0.0;
    double loss_laplacian = 0.0;
    double lr = 0.0;
    double wallclock_ms = 0.0;
    std::optional<double> validation_loss;
};

struct TrainOptions {
    /// When set, the loss over this set is computed after each epoch and the
    /// parameters of the best epoch are kept.
    const TrainingData* validation = nullptr;
    std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    int best_epoch = -1;
};

TrainReport train_stage1_gcm(ModelBundle& bundle, const TrainingData& data,
                             const TrainConfig& cfg, const TrainOptions& options = {});
TrainReport train_stage2_irs(ModelBundle& bundle, const TrainingData& data,
                             const TrainConfig& cfg, const TrainOptions& options = {});
/// Requires stages 1 and 2. The GCM subnet stays frozen; its parameter hash is
/// checked after every epoch.
TrainReport train_stage3_joint(ModelBundle& bundle, const TrainingData& data,
                               const TrainConfig& cfg, const TrainOptions& options = {});
TrainReport train_baseline(ModelBundle& bundle, BaselineKind kind, const TrainingData& data,
                           const TrainConfig& cfg, const TrainOptions& options = {});

/// Base layers (blurred + GCM residual) for every sample, from the frozen subnet.
nn::Tensor4f compute_base_layers(const ModelBundle& bundle, const TrainingData& data);

// Whole-dataset losses with the same normalization as training (per sample).
double evaluate_stage1(const ModelBundle& bundle, const TrainingData& data);
double evaluate_stage2(const ModelBundle& bundle, const TrainingData& data);
JointLoss evaluate_joint(const ModelBundle& bundle, const TrainingData& data,
                         double omega_detail = 1.0, double omega_laplacian = 1.0);
double evaluate_baseline(const ModelBundle& bundle, BaselineKind kind, const TrainingData& data);

void write_log_header(std::ostream& out);
void write_log_row(std::ostream& out, const EpochRecord& r);

}  // namespace saldl
