#include "saldl/verification.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "saldl/dataset.hpp"
#include "saldl/halftone.hpp"
#include "saldl/nn/gradcheck.hpp"
#include "saldl/nn/layers.hpp"
#include "saldl/objectives.hpp"

namespace saldl {

namespace {

constexpr double kGradTolerance = 1e-4;
constexpr double kCorruption = 1.05;

using GradVec = std::vector<nn::ConvGrads<double>>;

void add_groups(nn::GradCheckProblem& problem, nn::Subnet<double>& net, GradVec& grads) {
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        auto& layer = net.layers()[l];
        const std::string prefix = net.spec().name + ".conv" + std::to_string(l);
        problem.params.push_back({prefix + ".weight", layer.weights, grads[l].weights, net.frozen()});
        problem.params.push_back({prefix + ".bias", layer.bias, grads[l].bias, net.frozen()});
    }
}

void corrupt(GradVec& grads) {
    for (double& g : grads.front().weights) g *= kCorruption;
}

nn::Tensor4d random_tensor(std::mt19937_64& rng, int n, int c, int h, int w, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    nn::Tensor4d t(n, c, h, w);
    for (double& v : t.data()) v = dist(rng);
    return t;
}

PropertyCheck to_check(const std::string& name, const nn::GradCheckReport& r) {
    PropertyCheck c;
    c.name = name;
    c.measured = r.max_relative_error;
    c.threshold = kGradTolerance;
    c.passed = r.checked > 0 && r.max_relative_error < kGradTolerance;
    c.detail = "checked=" + std::to_string(r.checked) + " kinks_skipped=" + std::to_string(r.skipped_kinks) +
               " worst=" + r.worst_parameter;
    if (!r.excluded_frozen.empty()) {
        c.detail += " frozen_excluded=";
        for (std::size_t i = 0; i < r.excluded_frozen.size(); ++i) {
            c.detail += (i ? "," : "") + r.excluded_frozen[i];
        }
    }
    return c;
}

PropertyCheck subnet_case(int index, std::uint64_t seed, bool corrupt_backward) {
    std::mt19937_64 rng(seed);
    nn::SubnetSpec spec;
    spec.name = "net" + std::to_string(index);
    spec.block_count = 1 + static_cast<int>(rng() % 3);
    spec.input_channels = 1 + static_cast<int>(rng() % 4);
    spec.hidden_channels = 1 + static_cast<int>(rng() % 4);
    spec.output_channels = 1 + static_cast<int>(rng() % 4);
    auto net = nn::Subnet<double>::initialized(spec, rng());
    // Nonzero biases so the check covers them away from the origin.
    std::uniform_real_distribution<double> bias(-0.1, 0.1);
    for (auto& layer : net.layers()) {
        for (double& b : layer.bias) b = bias(rng);
    }
    const int batch = 2;
    const auto x = random_tensor(rng, batch, spec.input_channels, 8, 8, -1.0, 1.0);
    const auto target = random_tensor(rng, batch, spec.output_channels, 8, 8, -1.0, 1.0);

    auto grads = std::make_shared<GradVec>(net.zero_grads());
    nn::GradCheckProblem problem;
    add_groups(problem, net, *grads);
    problem.loss = [&](std::uint64_t* sig) {
        return regression_objective<double>(net, x, target, nullptr, sig);
    };
    problem.gradient = [&, grads] {
        for (auto& g : *grads) g.set_zero();
        regression_objective<double>(net, x, target, grads.get());
        if (corrupt_backward) corrupt(*grads);
    };
    nn::GradCheckOptions opts;
    opts.seed = seed;
    return to_check("gradcheck " + spec.name + " (" + std::to_string(spec.block_count) + " blocks, " +
                        std::to_string(spec.input_channels) + "->" + std::to_string(spec.hidden_channels) +
                        "->" + std::to_string(spec.output_channels) + ")",
                    nn::grad_check(problem, opts));
}

PropertyCheck joint_case(int index, std::uint64_t seed, bool corrupt_backward) {
    std::mt19937_64 rng(seed);
    const int hidden = 2 + static_cast<int>(rng() % 3);
    auto block = [&] { return 1 + static_cast<int>(rng() % 2); };
    auto gcm = nn::Subnet<double>::initialized({"gcm", block(), 1, hidden, 1}, rng());
    auto irs = nn::Subnet<double>::initialized({"irs", block(), 1, hidden, 1}, rng());
    auto head = nn::Subnet<double>::initialized({"ismp_head", block(), 1, hidden, 1}, rng());
    auto sards = nn::Subnet<double>::initialized({"sards", block(), 3, hidden, 1}, rng());
    gcm.set_frozen(true);

    const int batch = 2;
    auto halftone = random_tensor(rng, batch, 1, 8, 8, 0.0, 1.0);
    for (double& v : halftone.data()) v = v < 0.5 ? 0.0 : 1.0;
    const auto blurred = random_tensor(rng, batch, 1, 8, 8, 0.0, 1.0);
    const auto detail_target = random_tensor(rng, batch, 1, 8, 8, -0.5, 0.5);
    const auto lap_target = random_tensor(rng, batch, 1, 8, 8, -0.5, 0.5);
    const double omega_d = 1.0;
    const double omega_l = 0.5 + static_cast<double>(rng() % 100) / 100.0;

    auto base = [&] {
        auto b = gcm.forward(blurred);
        auto bd = b.data();
        auto src = blurred.data();
        for (std::size_t i = 0; i < bd.size(); ++i) bd[i] += src[i];
        return b;
    };
    auto gcm_grads = std::make_shared<GradVec>(gcm.zero_grads());
    auto grads = std::make_shared<JointGrads<double>>(
        JointGrads<double>{irs.zero_grads(), head.zero_grads(), sards.zero_grads()});
    nn::GradCheckProblem problem;
    add_groups(problem, gcm, *gcm_grads);
    add_groups(problem, irs, grads->irs);
    add_groups(problem, head, grads->head);
    add_groups(problem, sards, grads->sards);
    problem.loss = [&](std::uint64_t* sig) {
        return joint_objective<double>(irs, head, sards, base(), halftone, detail_target, lap_target,
                                       omega_d, omega_l, nullptr, sig)
            .total;
    };
    problem.gradient = [&, grads] {
        for (auto* v : {&grads->irs, &grads->head, &grads->sards}) {
            for (auto& g : *v) g.set_zero();
        }
        joint_objective<double>(irs, head, sards, base(), halftone, detail_target, lap_target, omega_d,
                                omega_l, grads.get());
        if (corrupt_backward) corrupt(grads->sards);
    };
    nn::GradCheckOptions opts;
    opts.seed = seed;
    return to_check("gradcheck joint" + std::to_string(index), nn::grad_check(problem, opts));
}

}  // namespace

std::vector<PropertyCheck> gradcheck_suite(const GradCheckSuiteOptions& options) {
    std::vector<PropertyCheck> out;
    std::mt19937_64 seeds(options.seed);
    for (int i = 0; i < options.networks; ++i) out.push_back(subnet_case(i, seeds(), options.corrupt_backward));
    for (int i = 0; i < options.joint_cases; ++i) out.push_back(joint_case(i, seeds(), options.corrupt_backward));
    return out;
}

PropertyCheck gcm_identity_check(int pairs, std::uint64_t seed, const Kernel& gaussian, double tolerance) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
        const int h = 8 + static_cast<int>(rng() % 41);
        const int w = 8 + static_cast<int>(rng() % 41);
        GrayImage original(h, w);
        for (double& v : original.pixels()) v = unit(rng);
        const GrayImage halftone = floyd_steinberg(original).to_gray();
        const GrayImage lhs = convolve_same(original - halftone, gaussian);
        const GrayImage rhs = convolve_same(original, gaussian) - convolve_same(halftone, gaussian);
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            worst = std::max(worst, std::abs(lhs.pixels()[i] - rhs.pixels()[i]));
        }
    }
    PropertyCheck c;
    c.name = "gcm identity";
    c.measured = worst;
    c.threshold = tolerance;
    c.passed = worst <= tolerance;
    c.detail = "pairs=" + std::to_string(pairs);
    return c;
}

std::vector<NarrowingRow> narrowing_check(const std::vector<std::pair<std::string, GrayImage>>& images,
                                          const Kernel& gaussian) {
    std::vector<NarrowingRow> rows;
    for (const auto& [name, img] : images) {
        const GrayImage original = clamp01(img);
        const auto report = residual_histogram(original, floyd_steinberg(original), gaussian);
        NarrowingRow r;
        r.name = name;
        r.additive = report.additive;
        r.gcm = report.gcm;
        r.std_ratio = report.gcm.std / report.additive.std;
        r.width_ratio = report.gcm.width99 / report.additive.width99;
        r.passed = report.gcm.std < report.additive.std && report.gcm.width99 < report.additive.width99;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace saldl
