// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "saldl/filters.hpp"
#include "saldl/halftone.hpp"
#include "saldl/metrics.hpp"
#include "saldl/networks.hpp"
#include "saldl/nn/subnet.hpp"
#include "saldl/pnm.hpp"
#include "saldl/toy_data.hpp"
#include "saldl/training.hpp"

using namespace saldl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool passed, const std::string& detail) {
    std::printf("%s %d %s: %s\n", passed ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!passed) ++failures;
}

void note(const std::string& line) {
    std::printf("  %s\n", line.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

GrayImage random_image(int h, int w, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    GrayImage img(h, w);
    for (double& v : img.pixels()) v = u(rng);
    return img;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// 1. Gradients against an independent central-difference oracle.

double half_mse(const nn::Tensor4d& pred, const nn::Tensor4d& target) {
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred.data()[i] - target.data()[i];
        s += d * d;
    }
    return s / pred.n();
}

// Bit pattern of every ReLU in the net, for skipping probes that cross a kink.
std::vector<bool> relu_pattern(const nn::Subnet<double>& net, const nn::Tensor4d& x) {
    nn::Subnet<double>::Cache cache;
    net.forward(x, cache);
    std::vector<bool> bits;
    for (std::size_t l = 1; l < cache.inputs.size(); ++l)
        for (double v : cache.inputs[l].data()) bits.push_back(v > 0.0);
    return bits;
}

void criterion_gradients() {
    const auto t0 = Clock::now();
    constexpr double eps = 1e-5;
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    std::size_t checked = 0;
    std::size_t kinks = 0;
    constexpr int kNets = 20;
    for (int k = 0; k < kNets; ++k) {
        nn::SubnetSpec spec;
        spec.name = "probe" + std::to_string(k);
        spec.block_count = 1 + static_cast<int>(rng() % 3);
        spec.input_channels = 1 + static_cast<int>(rng() % 4);
        spec.hidden_channels = 1 + static_cast<int>(rng() % 4);
        spec.output_channels = 1 + static_cast<int>(rng() % 4);
        auto net = nn::Subnet<double>::initialized(spec, rng());
        std::normal_distribution<double> n01(0.0, 0.1);
        for (auto& layer : net.layers())
            for (double& b : layer.bias) b = n01(rng);

        nn::Tensor4d x(2, spec.input_channels, 8, 8);
        nn::Tensor4d target(2, spec.output_channels, 8, 8);
        std::uniform_real_distribution<double> u(-1, 1);
        for (double& v : x.data()) v = u(rng);
        for (double& v : target.data()) v = u(rng);

        nn::Subnet<double>::Cache cache;
        const nn::Tensor4d pred = net.forward(x, cache);
        nn::Tensor4d grad_out(pred.n(), pred.c(), pred.h(), pred.w());
        for (std::size_t i = 0; i < pred.size(); ++i)
            grad_out.data()[i] = 2.0 * (pred.data()[i] - target.data()[i]) / pred.n();
        auto grads = net.zero_grads();
        net.backward(cache, grad_out, grads, false);

        const auto pattern = relu_pattern(net, x);
        auto probe = [&](double& p, double analytic) {
            const double saved = p;
            p = saved + eps;
            const double up = half_mse(net.forward(x), target);
            const bool up_ok = relu_pattern(net, x) == pattern;
            p = saved - eps;
            const double down = half_mse(net.forward(x), target);
            const bool down_ok = relu_pattern(net, x) == pattern;
            p = saved;
            if (!up_ok || !down_ok) {
                ++kinks;
                return;
            }
            const double numeric = (up - down) / (2.0 * eps);
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            worst = std::max(worst, std::abs(analytic - numeric) / denom);
            ++checked;
        };
        for (std::size_t l = 0; l < net.layers().size(); ++l) {
            auto& layer = net.layers()[l];
            for (std::size_t i = 0; i < layer.weights.size(); ++i) probe(layer.weights[i], grads[l].weights[i]);
            for (std::size_t i = 0; i < layer.bias.size(); ++i) probe(layer.bias[i], grads[l].bias[i]);
        }
    }
    const double secs = seconds_since(t0);
    report(1, "gradient correctness", worst < 1e-4 && secs < 120.0,
           std::to_string(kNets) + " nets, " + std::to_string(checked) + " parameters (" + std::to_string(kinks) +
               " kink probes skipped), max_rel_err=" + fmt("%.3e", worst) + " < 1e-4, runtime=" +
               fmt("%.1f", secs) + "s < 120s");
}

// ---------------------------------------------------------------------------
// 2. Blur distributes over the residual.

void criterion_distributivity() {
    std::mt19937_64 rng(7);
    const Kernel g = default_gcm_kernel();
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const int h = 8 + static_cast<int>(rng() % 57);
        const int w = 8 + static_cast<int>(rng() % 57);
        const GrayImage xo = random_image(h, w, rng);
        const GrayImage xi = random_image(h, w, rng);
        const GrayImage lhs = convolve_same(xo - xi, g);
        const GrayImage rhs = convolve_same(xo, g) - convolve_same(xi, g);
        for (std::size_t p = 0; p < lhs.size(); ++p) worst = std::max(worst, std::abs(lhs.pixels()[p] - rhs.pixels()[p]));
    }
    report(2, "blur distributivity", worst <= 1e-10, "10 pairs, max_abs=" + fmt("%.3e", worst) + " <= 1e-10");
}

// ---------------------------------------------------------------------------
// 3. Residual narrowing on natural images.

struct Spread {
    double std;
    double width99;
};

Spread spread(std::span<const double> pixels) {
    std::vector<double> v(pixels.begin(), pixels.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    return {std::sqrt(var / static_cast<double>(v.size())), quantile(0.995) - quantile(0.005)};
}

void criterion_narrowing() {
    const fs::path dir = fs::path(SALDL_TEST_DATA) / "natural";
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    const Kernel g = default_gcm_kernel();
    bool ok = files.size() == 5;
    for (const auto& f : files) {
        const GrayImage xo = load_pgm(f);
        const GrayImage xi = floyd_steinberg(xo).to_gray();
        const GrayImage add = xo - xi;
        const GrayImage gcm = convolve_same(xo, g) - convolve_same(xi, g);
        const Spread a = spread(add.pixels());
        const Spread b = spread(gcm.pixels());
        const bool row = b.std < a.std && b.width99 < a.width99;
        ok = ok && row;
        note(f.filename().string() + ": std " + fmt("%.4f", a.std) + " -> " + fmt("%.4f", b.std) + " (ratio " +
             fmt("%.3f", b.std / a.std) + "), width99 " + fmt("%.4f", a.width99) + " -> " + fmt("%.4f", b.width99) +
             " (ratio " + fmt("%.3f", b.width99 / a.width99) + ")" + (row ? "" : " NOT NARROWER"));
    }
    report(3, "residual narrowing", ok, std::to_string(files.size()) + " images, every std and width99 ratio < 1");
}

// ---------------------------------------------------------------------------
// 4. Error diffusion.

void criterion_floyd_steinberg() {
    const BitImage row = floyd_steinberg(GrayImage(1, 4, 0.5));
    const bool a = row.at(0, 0) == 1 && row.at(0, 1) == 0 && row.at(0, 2) == 1 && row.at(0, 3) == 0;

    const BitImage flat = floyd_steinberg(GrayImage(64, 64, 0.5));
    double mean = 0.0;
    for (auto b : flat.bits()) mean += b;
    mean /= 64.0 * 64.0;
    const double drift = std::abs(mean - 0.5);

    std::mt19937_64 rng(3);
    bool c = true;
    for (int i = 0; i < 5; ++i) {
        const BitImage once = floyd_steinberg(random_image(33, 47, rng));
        c = c && floyd_steinberg(once.to_gray()) == once;
    }
    report(4, "floyd-steinberg", a && drift <= 0.02 && c,
           std::string("(a) 1x4 trace ") + (a ? "[1,0,1,0]" : "mismatch") + ", (b) drift=" + fmt("%.5f", drift) +
               " <= 0.02, (c) idempotent=" + (c ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// 5. Kernel and metric oracles.

void criterion_oracles() {
    const Kernel k = default_gcm_kernel();
    double sum = 0.0;
    for (double t : k.taps()) sum += t;
    bool symmetric = true;
    const int n = k.side() - 1;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double v = k.at(i, j);
            for (double o : {k.at(j, i), k.at(n - i, j), k.at(i, n - j), k.at(n - i, n - j), k.at(n - j, i),
                             k.at(j, n - i), k.at(n - j, n - i)}) {
                symmetric = symmetric && o == v;
            }
        }
    }
    std::mt19937_64 rng(5);
    const GrayImage x = random_image(40, 40, rng);
    GrayImage y = x;
    for (double& v : y.pixels()) v += 0.1;
    const double p = psnr(x, y);
    const double s = ssim(x, x);
    const bool ok = std::abs(sum - 1.0) <= 1e-12 && symmetric && std::abs(p - 20.0) <= 1e-9 && std::abs(s - 1.0) <= 1e-9;
    report(5, "kernel and metric oracles", ok,
           "tap_sum-1=" + fmt("%.2e", sum - 1.0) + ", 8-fold symmetric=" + (symmetric ? "yes" : "no") +
               ", psnr=" + fmt("%.12f", p) + ", ssim(x,x)=" + fmt("%.12f", s));
}

// ---------------------------------------------------------------------------
// 6. Single-triplet overfit of stage 1.

void criterion_overfit() {
    const auto t0 = Clock::now();
    const auto triplets = toy_dataset(1, 7);
    auto bundle = ModelBundle::create(ArchConfig::desk(), 1);
    const TrainingData data(triplets, bundle.gaussian);
    TrainConfig cfg = TrainConfig::desk(1);
    cfg.batch_size = 1;
    cfg.epochs = 20;
    cfg.iters_per_epoch = 500;
    cfg.lr_start = cfg.lr_end = 5e-4;
    const double initial = evaluate_stage1(bundle, data);
    double best = initial;
    long reached = -1;
    TrainOptions opts;
    opts.on_epoch = [&](const EpochRecord& r) {
        const double loss = evaluate_stage1(bundle, data);
        best = std::min(best, loss);
        if (reached < 0 && loss < 1e-6) reached = r.iter;
    };
    train_stage1_gcm(bundle, data, cfg, opts);
    const double secs = seconds_since(t0);
    note("stage-1 loss " + fmt("%.4g", initial) + " -> best " + fmt("%.4g", best) + " over " +
         std::to_string(cfg.epochs * cfg.iters_per_epoch) + " iterations (batch 1, lr " + fmt("%g", cfg.lr_start) +
         ", momentum " + fmt("%g", cfg.momentum) + ")");
    report(6, "single-triplet overfit", reached >= 0 && secs < 300.0,
           "best loss=" + fmt("%.4g", best) + " < 1e-6" + (reached >= 0 ? " at iter " + std::to_string(reached) : "") +
               ", runtime=" + fmt("%.1f", secs) + "s < 300s");
}

// ---------------------------------------------------------------------------
// 7 and 8. Desk-scale end-to-end run on the structured toy set.

void criterion_end_to_end() {
    const auto triplets = toy_dataset(16, 2024);
    auto bundle = ModelBundle::create(ArchConfig::desk(), 1);
    const TrainingData data(triplets, bundle.gaussian);
    std::map<std::string, std::vector<double>> epoch_losses;
    TrainOptions opts;
    opts.on_epoch = [&](const EpochRecord& r) {
        epoch_losses[r.stage].push_back(r.loss_total);
        note("stage " + r.stage + " epoch " + std::to_string(r.epoch) + " loss " + fmt("%.5g", r.loss_total) + " (" +
             fmt("%.0f", r.wallclock_ms / 1000.0) + "s)");
    };
    const auto t0 = Clock::now();
    train_stage1_gcm(bundle, data, TrainConfig::desk(1), opts);
    train_stage2_irs(bundle, data, TrainConfig::desk(2), opts);
    const double joint_initial = evaluate_joint(bundle, data).total;
    train_stage3_joint(bundle, data, TrainConfig::desk(3), opts);
    const double joint_final = evaluate_joint(bundle, data).total;
    note("joint loss " + fmt("%.5g", joint_initial) + " -> " + fmt("%.5g", joint_final) + " (drop " +
         fmt("%.1f", 100.0 * (1.0 - joint_final / joint_initial)) + "%)");
    for (const auto& [stage, losses] : epoch_losses) {
        note("stage " + stage + " last/first epoch-mean loss ratio " + fmt("%.3f", losses.back() / losses.front()));
    }

    double recon = 0.0;
    double blurred = 0.0;
    double base_only = 0.0;
    for (const auto& t : triplets) {
        const GrayImage h = t.halftone.to_gray();
        recon += psnr(reconstruct(h, bundle), t.original);
        blurred += psnr(convolve_same(h, bundle.gaussian), t.original);
        base_only += psnr(clamp01(predict_base(h, bundle).base), t.original);
    }
    const double count = static_cast<double>(triplets.size());
    recon /= count;
    blurred /= count;
    base_only /= count;
    const double secs = seconds_since(t0);
    report(7, "toy end-to-end", recon >= blurred + 2.0 && recon >= base_only + 0.5 && secs < 1800.0,
           "psnr reconstruct=" + fmt("%.3f", recon) + " blurred=" + fmt("%.3f", blurred) + " (+" +
               fmt("%.3f", recon - blurred) + " >= 2) base-only=" + fmt("%.3f", base_only) + " (+" +
               fmt("%.3f", recon - base_only) + " >= 0.5), runtime=" + fmt("%.0f", secs) + "s < 1800s");

    train_baseline(bundle, BaselineKind::PRL, data, TrainConfig::desk(3), opts);
    const JointLoss saldl = evaluate_joint(bundle, data);
    const double prl = evaluate_baseline(bundle, BaselineKind::PRL, data);
    report(8, "baseline direction", saldl.detail <= prl,
           "final training loss saldl=" + fmt("%.5g", saldl.detail) + " <= prl=" + fmt("%.5g", prl) +
               " (ratio " + fmt("%.3f", saldl.detail / prl) + ")");
}

// ---------------------------------------------------------------------------
// 9. Determinism of the train command and the stage-3 freeze.

bool cli_ok(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    if (code != cli::kOk) note("command failed (" + std::to_string(code) + "): " + err.str());
    return code == cli::kOk;
}

void criterion_determinism() {
    const fs::path root = fs::temp_directory_path() / "saldl_acceptance_determinism";
    fs::remove_all(root);
    const std::string data = (root / "data").string();
    bool ran = cli_ok({"dataset", std::string(SALDL_TEST_DATA) + "/natural", data, "--patches", "16", "--seed", "11"});
    auto train = [&](const std::string& stage, const fs::path& model) {
        return cli_ok({"train", "--stage", stage, "--data", data, "--model", model.string(), "--preset", "desk",
                       "--arch", "desk", "--seed", "42", "--epochs", "2", "--iters-per-epoch", "40"});
    };
    ran = ran && train("1", root / "a") && train("1", root / "b");
    const std::string a = slurp(root / "a" / "gcm.ckpt");
    const std::string b = slurp(root / "b" / "gcm.ckpt");
    const bool identical = ran && !a.empty() && a == b;

    ran = ran && train("2", root / "a") && train("3", root / "a");
    const std::string after = slurp(root / "a" / "gcm.ckpt");
    const bool frozen = ran && after == a && load_bundle(root / "a").stage3.trained;
    fs::remove_all(root);
    report(9, "determinism and freeze", identical && frozen,
           std::string("stage-1 checkpoints bit-identical=") + (identical ? "yes" : "no") + " (" +
               std::to_string(a.size()) + " bytes), gcm unchanged by stage 3=" + (frozen ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// 10. Composition identity.

void criterion_composition() {
    std::mt19937_64 rng(99);
    int exact = 0;
    for (int i = 0; i < 100; ++i) {
        auto b = ModelBundle::create(ArchConfig::desk(), rng());
        b.stage1.trained = b.stage2.trained = b.stage3.trained = true;
        std::normal_distribution<float> bias(0.0f, 0.05f);
        for (auto* net : {&b.gcm, &b.irs, &b.ismp_head, &b.sards})
            for (auto& layer : net->layers())
                for (float& v : layer.bias) v = bias(rng);
        const GrayImage h = floyd_steinberg(random_image(12 + i % 9, 12 + i % 7, rng)).to_gray();
        const auto base = predict_base(h, b);
        const auto structure = predict_structure_map(h, b);
        const GrayImage detail = predict_detail(base.base, structure.laplacian, h, b);
        if (reconstruct(h, b) == clamp01(base.base + detail)) ++exact;
    }
    report(10, "composition identity", exact == 100, std::to_string(exact) + "/100 parameter states exact");
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<void()>>> criteria = {
        {1, criterion_gradients},  {2, criterion_distributivity}, {3, criterion_narrowing},
        {4, criterion_floyd_steinberg}, {5, criterion_oracles},   {6, criterion_overfit},
        {7, criterion_end_to_end}, {9, criterion_determinism},    {10, criterion_composition},
    };
    for (const auto& [id, fn] : criteria) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, "exception", false, e.what());
        }
    }
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
