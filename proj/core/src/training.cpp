#include "saldl/training.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "saldl/error.hpp"
#include "saldl/nn/layers.hpp"

namespace saldl {

// ---------------------------------------------------------------------------
// Objectives

template <class T>
double regression_objective(const nn::Subnet<T>& net, const nn::Tensor4<T>& x,
                            const nn::Tensor4<T>& target, std::vector<nn::ConvGrads<T>>* grads,
                            std::uint64_t* signature) {
    typename nn::Subnet<T>::Cache cache;
    auto y = net.forward(x, cache);
    if (signature) *signature = nn::relu_signature<T>(cache);
    auto loss = nn::mse_loss(y, target);
    if (grads) net.backward(cache, loss.grad, *grads, false);
    return loss.loss;
}

template <class T>
JointLoss joint_objective(const nn::Subnet<T>& irs, const nn::Subnet<T>& head,
                          const nn::Subnet<T>& sards, const nn::Tensor4<T>& base,
                          const nn::Tensor4<T>& halftone, const nn::Tensor4<T>& detail_target,
                          const nn::Tensor4<T>& laplacian_target, double omega_detail,
                          double omega_laplacian, JointGrads<T>* grads, std::uint64_t* signature) {
    typename nn::Subnet<T>::Cache irs_cache;
    typename nn::Subnet<T>::Cache head_cache;
    typename nn::Subnet<T>::Cache sards_cache;
    auto initial = irs.forward(halftone, irs_cache);
    auto laplacian = head.forward(initial, head_cache);
    auto stacked = nn::concat_channels<T>({&base, &laplacian, &halftone});
    auto detail = sards.forward(stacked, sards_cache);
    if (signature) {
        std::uint64_t h = nn::relu_signature<T>(irs_cache);
        h = nn::relu_signature<T>(head_cache, h);
        *signature = nn::relu_signature<T>(sards_cache, h);
    }
    auto detail_loss = nn::mse_loss(detail, detail_target);
    auto lap_loss = nn::mse_loss(laplacian, laplacian_target);
    JointLoss r{omega_detail * detail_loss.loss + omega_laplacian * lap_loss.loss, detail_loss.loss,
                lap_loss.loss};
    if (!grads) return r;

    for (T& g : detail_loss.grad.data()) g *= static_cast<T>(omega_detail);
    auto g_stacked = sards.backward(sards_cache, detail_loss.grad, grads->sards, true);
    const int widths[] = {1, 1, 1};
    auto parts = nn::split_channels<T>(g_stacked, widths);
    // parts[0] (base) and parts[2] (halftone) are constants here.
    auto& g_lap = parts[1];
    auto gl = g_lap.data();
    auto gd = lap_loss.grad.data();
    for (std::size_t i = 0; i < gl.size(); ++i) gl[i] += static_cast<T>(omega_laplacian) * gd[i];
    auto g_initial = head.backward(head_cache, g_lap, grads->head, true);
    irs.backward(irs_cache, g_initial, grads->irs, false);
    return r;
}

template <class T>
double baseline_objective(const nn::Subnet<T>& net, const nn::Tensor4<T>& base,
                          const nn::Tensor4<T>& halftone, const nn::Tensor4<T>& target,
                          std::vector<nn::ConvGrads<T>>* grads, std::uint64_t* signature) {
    auto x = nn::concat_channels<T>({&base, &halftone});
    return regression_objective(net, x, target, grads, signature);
}

#define SALDL_INSTANTIATE_OBJECTIVES(T)                                                           \
    template double regression_objective<T>(const nn::Subnet<T>&, const nn::Tensor4<T>&,         \
                                             const nn::Tensor4<T>&,                               \
                                             std::vector<nn::ConvGrads<T>>*, std::uint64_t*);     \
    template JointLoss joint_objective<T>(                                                        \
        const nn::Subnet<T>&, const nn::Subnet<T>&, const nn::Subnet<T>&, const nn::Tensor4<T>&,  \
        const nn::Tensor4<T>&, const nn::Tensor4<T>&, const nn::Tensor4<T>&, double, double,      \
        JointGrads<T>*, std::uint64_t*);                                                          \
    template double baseline_objective<T>(const nn::Subnet<T>&, const nn::Tensor4<T>&,            \
                                          const nn::Tensor4<T>&, const nn::Tensor4<T>&,           \
                                          std::vector<nn::ConvGrads<T>>*, std::uint64_t*);

SALDL_INSTANTIATE_OBJECTIVES(float)
SALDL_INSTANTIATE_OBJECTIVES(double)

#undef SALDL_INSTANTIATE_OBJECTIVES

// ---------------------------------------------------------------------------
// Configuration

TrainConfig TrainConfig::desk(int stage) {
    TrainConfig c;
    c.stage = stage;
    c.epochs = 4;
    c.iters_per_epoch = 500;
    c.batch_size = 16;
    c.lr_start = stage == 1 ? 2e-4 : 3e-5;
    c.lr_end = c.lr_start / 4;
    c.lr_step_epochs = 1;
    c.momentum = 0.9;
    return c;
}

void TrainConfig::validate() const {
    if (epochs < 1 || iters_per_epoch < 1 || batch_size < 1 || lr_step_epochs < 1) {
        throw InvalidArgument("training counts must be positive");
    }
    if (!(lr_end >= 0.0) || lr_start < lr_end) {
        throw InvalidArgument("learning rates must satisfy lr_start >= lr_end >= 0");
    }
    if (momentum < 0.0 || momentum >= 1.0) throw InvalidArgument("momentum must lie in [0, 1)");
    if (omega_detail < 0.0 || omega_laplacian < 0.0) throw InvalidArgument("loss weights must be >= 0");
}

const std::vector<std::string>& TrainConfig::keys() {
    static const std::vector<std::string> k = {
        "stage",    "epochs",       "iters_per_epoch", "batch_size",      "lr_start", "lr_end",
        "lr_step_epochs", "momentum", "omega_detail", "omega_laplacian", "seed"};
    return k;
}

TrainConfig TrainConfig::from_keyvalue(const KeyValueFile& kv, TrainConfig c) {
    auto get_int = [&](const char* key, int& dst) {
        if (kv.has(key)) dst = static_cast<int>(kv.get_int(key));
    };
    auto get_double = [&](const char* key, double& dst) {
        if (kv.has(key)) dst = kv.get_double(key);
    };
    get_int("stage", c.stage);
    get_int("epochs", c.epochs);
    get_int("iters_per_epoch", c.iters_per_epoch);
    get_int("batch_size", c.batch_size);
    get_double("lr_start", c.lr_start);
    get_double("lr_end", c.lr_end);
    get_int("lr_step_epochs", c.lr_step_epochs);
    get_double("momentum", c.momentum);
    get_double("omega_detail", c.omega_detail);
    get_double("omega_laplacian", c.omega_laplacian);
    if (kv.has("seed")) c.seed = std::stoull(kv.get("seed"));
    return c;
}

KeyValueFile TrainConfig::to_keyvalue() const {
    KeyValueFile kv;
    kv.set("stage", static_cast<long>(stage));
    kv.set("epochs", static_cast<long>(epochs));
    kv.set("iters_per_epoch", static_cast<long>(iters_per_epoch));
    kv.set("batch_size", static_cast<long>(batch_size));
    kv.set_double("lr_start", lr_start);
    kv.set_double("lr_end", lr_end);
    kv.set("lr_step_epochs", static_cast<long>(lr_step_epochs));
    kv.set_double("momentum", momentum);
    kv.set_double("omega_detail", omega_detail);
    kv.set_double("omega_laplacian", omega_laplacian);
    kv.set("seed", std::to_string(seed));
    return kv;
}

double lr_schedule(int epoch, const TrainConfig& cfg) {
    const int steps = cfg.epochs / cfg.lr_step_epochs;
    if (steps <= 1) return cfg.lr_start;
    const int k = std::max(epoch, 0) / cfg.lr_step_epochs;
    const double lr =
        cfg.lr_start - (cfg.lr_start - cfg.lr_end) * static_cast<double>(k) / (steps - 1);
    return std::max(lr, cfg.lr_end);
}

// ---------------------------------------------------------------------------
// Data

namespace {

void copy_plane(const GrayImage& img, nn::Tensor4f& t, int n) {
    auto src = img.pixels();
    auto dst = t.plane(n, 0);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>(src[i]);
}

}  // namespace

TrainingData::TrainingData(const std::vector<SampleTriplet>& triplets, const Kernel& gaussian) {
    if (triplets.empty()) throw InvalidArgument("training data is empty");
    const int h = triplets.front().original.height();
    const int w = triplets.front().original.width();
    const int n = static_cast<int>(triplets.size());
    original_ = nn::Tensor4f(n, 1, h, w);
    laplacian_ = nn::Tensor4f(n, 1, h, w);
    halftone_ = nn::Tensor4f(n, 1, h, w);
    blurred_ = nn::Tensor4f(n, 1, h, w);
    gcm_target_ = nn::Tensor4f(n, 1, h, w);
    for (int i = 0; i < n; ++i) {
        const auto& t = triplets[static_cast<std::size_t>(i)];
        if (t.original.height() != h || t.original.width() != w || !t.original.same_shape(t.laplacian) ||
            t.halftone.height() != h || t.halftone.width() != w) {
            throw DimensionError("training triplets must share one patch size");
        }
        GrayImage half = t.halftone.to_gray();
        copy_plane(t.original, original_, i);
        copy_plane(t.laplacian, laplacian_, i);
        copy_plane(half, halftone_, i);
        copy_plane(convolve_same(half, gaussian), blurred_, i);
        copy_plane(saldl::gcm_target(t, gaussian), gcm_target_, i);
    }
}

nn::Tensor4f gather(const nn::Tensor4f& source, std::span<const std::size_t> indices) {
    nn::Tensor4f out(static_cast<int>(indices.size()), source.c(), source.h(), source.w());
    for (std::size_t b = 0; b < indices.size(); ++b) {
        auto src = source.sample(static_cast<int>(indices[b]));
        std::copy(src.begin(), src.end(), out.sample(static_cast<int>(b)).begin());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Training loop

namespace {

constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

std::uint64_t epoch_seed(std::uint64_t seed, std::uint64_t stream, int epoch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(epoch)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

void check_finite(const std::vector<nn::ConvGrads<float>>& grads, const std::string& name) {
    for (std::size_t l = 0; l < grads.size(); ++l) {
        for (float v : grads[l].weights) {
            if (!std::isfinite(v)) {
                throw NumericError("non-finite gradient in " + name + ".conv" + std::to_string(l) + ".weight");
            }
        }
        for (float v : grads[l].bias) {
            if (!std::isfinite(v)) {
                throw NumericError("non-finite gradient in " + name + ".conv" + std::to_string(l) + ".bias");
            }
        }
    }
}

struct StageHooks {
    std::string label;
    std::uint64_t stream = 0;
    StageStatus* status = nullptr;
    std::function<JointLoss(std::span<const std::size_t>, double)> step;
    std::function<double(const TrainingData&)> validate;
    std::function<void()> snapshot;
    std::function<void()> restore;
    std::function<void()> after_epoch;
};

TrainReport run_stage(const TrainingData& data, const TrainConfig& cfg, const TrainOptions& options,
                      StageHooks& hooks) {
    cfg.validate();
    TrainReport report;
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = data.size();
    long iter = static_cast<long>(hooks.status->epochs) * cfg.iters_per_epoch;
    std::optional<double> best;
    std::vector<std::size_t> idx(static_cast<std::size_t>(cfg.batch_size));

    for (int epoch = hooks.status->epochs; epoch < cfg.epochs; ++epoch) {
        const double lr = lr_schedule(epoch, cfg);
        std::mt19937_64 rng(epoch_seed(cfg.seed, hooks.stream, epoch));
        double sum_total = 0.0;
        double sum_detail = 0.0;
        double sum_lap = 0.0;
        for (int it = 0; it < cfg.iters_per_epoch; ++it) {
            for (auto& i : idx) i = static_cast<std::size_t>(rng() % n);
            JointLoss loss = hooks.step(idx, lr);
            if (!std::isfinite(loss.total)) {
                throw NumericError("stage " + hooks.label + ": loss became non-finite at epoch " +
                                   std::to_string(epoch) + ", iteration " + std::to_string(it));
            }
            sum_total += loss.total;
            sum_detail += loss.detail;
            sum_lap += loss.laplacian;
            ++iter;
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.iter = iter;
        rec.stage = hooks.label;
        rec.loss_total = sum_total / cfg.iters_per_epoch;
        rec.loss_detail = sum_detail / cfg.iters_per_epoch;
        rec.loss_laplacian = sum_lap / cfg.iters_per_epoch;
        rec.lr = lr;
        rec.wallclock_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (options.validation && hooks.validate) {
            const double v = hooks.validate(*options.validation);
            rec.validation_loss = v;
            if (!best || v < *best) {
                best = v;
                report.best_epoch = epoch;
                hooks.snapshot();
            }
        }
        hooks.status->epochs = epoch + 1;
        if (hooks.after_epoch) hooks.after_epoch();
        report.epochs.push_back(rec);
        if (options.on_epoch) options.on_epoch(rec);
    }
    if (best) hooks.restore();
    hooks.status->trained = true;
    return report;
}

template <class Fn>
double mean_over(std::size_t n, Fn&& batch_loss) {
    constexpr std::size_t kChunk = 64;
    double sum = 0.0;
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < n; start += kChunk) {
        idx.clear();
        for (std::size_t i = start; i < std::min(n, start + kChunk); ++i) idx.push_back(i);
        sum += batch_loss(std::span<const std::size_t>(idx)) * static_cast<double>(idx.size());
    }
    return sum / static_cast<double>(n);
}

nn::Tensor4f subtract(const nn::Tensor4f& a, const nn::Tensor4f& b) {
    nn::Tensor4f out = a;
    auto o = out.data();
    auto q = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= q[i];
    return out;
}

// The detail target must satisfy detail + base = original up to float
// rounding of the stored difference.
void check_detail_targets(const nn::Tensor4f& detail, const nn::Tensor4f& base,
                          const nn::Tensor4f& original) {
    auto d = detail.data();
    auto b = base.data();
    auto o = original.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double err = std::abs(static_cast<double>(d[i]) + b[i] - o[i]);
        if (err > 1e-6) throw NumericError("detail target inconsistent with base layer");
    }
}

}  // namespace

nn::Tensor4f compute_base_layers(const ModelBundle& bundle, const TrainingData& data) {
    nn::Tensor4f base = data.blurred_halftone();
    constexpr std::size_t kChunk = 64;
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < data.size(); start += kChunk) {
        idx.clear();
        for (std::size_t i = start; i < std::min(data.size(), start + kChunk); ++i) idx.push_back(i);
        auto residual = bundle.gcm.forward(gather(data.blurred_halftone(), idx));
        for (std::size_t b = 0; b < idx.size(); ++b) {
            auto dst = base.sample(static_cast<int>(idx[b]));
            auto src = residual.sample(static_cast<int>(b));
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        }
    }
    return base;
}

TrainReport train_stage1_gcm(ModelBundle& bundle, const TrainingData& data, const TrainConfig& cfg,
                             const TrainOptions& options) {
    auto& net = bundle.gcm;
    net.set_frozen(false);
    nn::SgdOptimizer<float> opt(cfg.momentum);
    nn::Subnet<float> best = net;
    StageHooks hooks;
    hooks.label = "1";
    hooks.stream = 1;
    hooks.status = &bundle.stage1;
    hooks.step = [&](std::span<const std::size_t> idx, double lr) {
        auto grads = net.zero_grads();
        double l = regression_objective(net, gather(data.blurred_halftone(), idx),
                                        gather(data.gcm_target(), idx), &grads);
        check_finite(grads, "gcm");
        opt.step(net, grads, lr);
        return JointLoss{l, kNotApplicable, kNotApplicable};
    };
    hooks.validate = [&](const TrainingData& v) { return evaluate_stage1(bundle, v); };
    hooks.snapshot = [&] { best = net; };
    hooks.restore = [&] { net = best; };
    TrainReport r = run_stage(data, cfg, options, hooks);
    net.set_frozen(true);
    return r;
}

TrainReport train_stage2_irs(ModelBundle& bundle, const TrainingData& data, const TrainConfig& cfg,
                             const TrainOptions& options) {
    auto& net = bundle.irs;
    net.set_frozen(false);
    nn::SgdOptimizer<float> opt(cfg.momentum);
    nn::Subnet<float> best = net;
    StageHooks hooks;
    hooks.label = "2";
    hooks.stream = 2;
    hooks.status = &bundle.stage2;
    hooks.step = [&](std::span<const std::size_t> idx, double lr) {
        auto grads = net.zero_grads();
        double l = regression_objective(net, gather(data.halftone(), idx), gather(data.original(), idx),
                                        &grads);
        check_finite(grads, "irs");
        opt.step(net, grads, lr);
        return JointLoss{l, kNotApplicable, kNotApplicable};
    };
    hooks.validate = [&](const TrainingData& v) { return evaluate_stage2(bundle, v); };
    hooks.snapshot = [&] { best = net; };
    hooks.restore = [&] { net = best; };
    return run_stage(data, cfg, options, hooks);
}

TrainReport train_stage3_joint(ModelBundle& bundle, const TrainingData& data, const TrainConfig& cfg,
                               const TrainOptions& options) {
    if (!bundle.stage1.trained) {
        throw UntrainedError("stage 3 needs the stage-1 GCM checkpoint (gcm.ckpt, stage1.trained)");
    }
    if (!bundle.stage2.trained) {
        throw UntrainedError("stage 3 needs the stage-2 IRS checkpoint (irs.ckpt, stage2.trained)");
    }
    bundle.gcm.set_frozen(true);
    bundle.irs.set_frozen(false);
    bundle.ismp_head.set_frozen(false);
    bundle.sards.set_frozen(false);
    const std::uint64_t gcm_hash = nn::parameter_hash(bundle.gcm);

    const nn::Tensor4f base = compute_base_layers(bundle, data);
    const nn::Tensor4f detail = subtract(data.original(), base);

    nn::SgdOptimizer<float> opt_irs(cfg.momentum);
    nn::SgdOptimizer<float> opt_head(cfg.momentum);
    nn::SgdOptimizer<float> opt_sards(cfg.momentum);
    nn::Subnet<float> best_irs = bundle.irs;
    nn::Subnet<float> best_head = bundle.ismp_head;
    nn::Subnet<float> best_sards = bundle.sards;

    StageHooks hooks;
    hooks.label = "3";
    hooks.stream = 3;
    hooks.status = &bundle.stage3;
    hooks.step = [&](std::span<const std::size_t> idx, double lr) {
        auto b = gather(base, idx);
        auto d = gather(detail, idx);
        check_detail_targets(d, b, gather(data.original(), idx));
        JointGrads<float> grads{bundle.irs.zero_grads(), bundle.ismp_head.zero_grads(),
                                bundle.sards.zero_grads()};
        JointLoss l = joint_objective(bundle.irs, bundle.ismp_head, bundle.sards, b,
                                      gather(data.halftone(), idx), d, gather(data.laplacian(), idx),
                                      cfg.omega_detail, cfg.omega_laplacian, &grads);
        check_finite(grads.irs, "irs");
        check_finite(grads.head, "ismp_head");
        check_finite(grads.sards, "sards");
        opt_irs.step(bundle.irs, grads.irs, lr);
        opt_head.step(bundle.ismp_head, grads.head, lr);
        opt_sards.step(bundle.sards, grads.sards, lr);
        return l;
    };
    hooks.validate = [&](const TrainingData& v) {
        return evaluate_joint(bundle, v, cfg.omega_detail, cfg.omega_laplacian).total;
    };
    hooks.snapshot = [&] {
        best_irs = bundle.irs;
        best_head = bundle.ismp_head;
        best_sards = bundle.sards;
    };
    hooks.restore = [&] {
        bundle.irs = best_irs;
        bundle.ismp_head = best_head;
        bundle.sards = best_sards;
    };
    hooks.after_epoch = [&] {
        if (nn::parameter_hash(bundle.gcm) != gcm_hash) {
            throw Error("GCM parameters changed during stage 3");
        }
    };
    return run_stage(data, cfg, options, hooks);
}

TrainReport train_baseline(ModelBundle& bundle, BaselineKind kind, const TrainingData& data,
                           const TrainConfig& cfg, const TrainOptions& options) {
    if (!bundle.stage1.trained) {
        throw UntrainedError("baselines need the stage-1 GCM checkpoint (gcm.ckpt, stage1.trained)");
    }
    auto& net = bundle.baseline(kind);
    net.set_frozen(false);
    const nn::Tensor4f base = compute_base_layers(bundle, data);
    const nn::Tensor4f target = kind == BaselineKind::PRL ? subtract(data.original(), base) : data.original();
    nn::SgdOptimizer<float> opt(cfg.momentum);
    nn::Subnet<float> best = net;
    StageHooks hooks;
    hooks.label = to_string(kind);
    hooks.stream = kind == BaselineKind::PRL ? 5 : 6;
    hooks.status = &bundle.baseline_status(kind);
    hooks.step = [&](std::span<const std::size_t> idx, double lr) {
        auto grads = net.zero_grads();
        double l = baseline_objective(net, gather(base, idx), gather(data.halftone(), idx),
                                      gather(target, idx), &grads);
        check_finite(grads, to_string(kind));
        opt.step(net, grads, lr);
        return JointLoss{l, kind == BaselineKind::PRL ? l : kNotApplicable, kNotApplicable};
    };
    hooks.validate = [&](const TrainingData& v) { return evaluate_baseline(bundle, kind, v); };
    hooks.snapshot = [&] { best = net; };
    hooks.restore = [&] { net = best; };
    return run_stage(data, cfg, options, hooks);
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate_stage1(const ModelBundle& bundle, const TrainingData& data) {
    return mean_over(data.size(), [&](std::span<const std::size_t> idx) {
        return regression_objective<float>(bundle.gcm, gather(data.blurred_halftone(), idx),
                                    gather(data.gcm_target(), idx), nullptr);
    });
}

double evaluate_stage2(const ModelBundle& bundle, const TrainingData& data) {
    return mean_over(data.size(), [&](std::span<const std::size_t> idx) {
        return regression_objective<float>(bundle.irs, gather(data.halftone(), idx),
                                    gather(data.original(), idx), nullptr);
    });
}

JointLoss evaluate_joint(const ModelBundle& bundle, const TrainingData& data, double omega_detail,
                         double omega_laplacian) {
    const nn::Tensor4f base = compute_base_layers(bundle, data);
    const nn::Tensor4f detail = subtract(data.original(), base);
    JointLoss sum;
    double count = 0.0;
    constexpr std::size_t kChunk = 64;
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < data.size(); start += kChunk) {
        idx.clear();
        for (std::size_t i = start; i < std::min(data.size(), start + kChunk); ++i) idx.push_back(i);
        JointLoss l = joint_objective<float>(bundle.irs, bundle.ismp_head, bundle.sards, gather(base, idx),
                                             gather(data.halftone(), idx), gather(detail, idx),
                                             gather(data.laplacian(), idx), omega_detail,
                                             omega_laplacian, nullptr);
        const double k = static_cast<double>(idx.size());
        sum.total += l.total * k;
        sum.detail += l.detail * k;
        sum.laplacian += l.laplacian * k;
        count += k;
    }
    return {sum.total / count, sum.detail / count, sum.laplacian / count};
}

double evaluate_baseline(const ModelBundle& bundle, BaselineKind kind, const TrainingData& data) {
    const auto& net = bundle.baseline(kind);
    const nn::Tensor4f base = compute_base_layers(bundle, data);
    const nn::Tensor4f target = kind == BaselineKind::PRL ? subtract(data.original(), base) : data.original();
    return mean_over(data.size(), [&](std::span<const std::size_t> idx) {
        return baseline_objective<float>(net, gather(base, idx), gather(data.halftone(), idx),
                                  gather(target, idx), nullptr);
    });
}

// ---------------------------------------------------------------------------
// Log

namespace {

void put_value(std::ostream& out, double v) {
    if (std::isfinite(v)) out << format_double(v);
}

}  // namespace

void write_log_header(std::ostream& out) {
    out << "epoch,iter,stage,loss_total,loss_detail,loss_laplacian,lr,wallclock_ms\n";
}

void write_log_row(std::ostream& out, const EpochRecord& r) {
    out << r.epoch << ',' << r.iter << ',' << r.stage << ',';
    put_value(out, r.loss_total);
    out << ',';
    put_value(out, r.loss_detail);
    out << ',';
    put_value(out, r.loss_laplacian);
    out << ',';
    put_value(out, r.lr);
    out << ',' << static_cast<long long>(std::llround(r.wallclock_ms)) << '\n';
}

}  // namespace saldl
