#include "saldl/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "saldl/error.hpp"

namespace saldl::nn {

GradCheckReport grad_check(GradCheckProblem& problem, const GradCheckOptions& options) {
    if (!(options.epsilon > 0.0)) throw InvalidArgument("grad check epsilon must be positive");
    GradCheckReport report;

    problem.gradient();
    std::vector<std::vector<double>> analytic;
    analytic.reserve(problem.params.size());
    for (const auto& g : problem.params) analytic.emplace_back(g.grads.begin(), g.grads.end());

    std::uint64_t base_sig = 0;
    problem.loss(&base_sig);

    std::mt19937_64 rng(options.seed);
    for (std::size_t gi = 0; gi < problem.params.size(); ++gi) {
        ParamGroup& group = problem.params[gi];
        if (group.frozen) {
            report.excluded_frozen.push_back(group.name);
            continue;
        }
        std::vector<std::size_t> idx(group.values.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        if (options.samples_per_group > 0 && options.samples_per_group < idx.size()) {
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(options.samples_per_group);
        }
        for (std::size_t i : idx) {
            const double orig = group.values[i];
            std::uint64_t sig_plus = 0;
            std::uint64_t sig_minus = 0;
            group.values[i] = orig + options.epsilon;
            const double lp = problem.loss(&sig_plus);
            group.values[i] = orig - options.epsilon;
            const double lm = problem.loss(&sig_minus);
            group.values[i] = orig;
            if (sig_plus != base_sig || sig_minus != base_sig) {
                ++report.skipped_kinks;
                continue;
            }
            const double central = (lp - lm) / (2.0 * options.epsilon);
            const double a = analytic[gi][i];
            const double denom = std::max({std::abs(a), std::abs(central), 1e-8});
            const double rel = std::abs(a - central) / denom;
            ++report.checked;
            if (rel > report.max_relative_error || !std::isfinite(rel)) {
                report.max_relative_error = std::isfinite(rel) ? rel : INFINITY;
                report.worst_parameter = group.name + "[" + std::to_string(i) + "]";
            }
        }
    }
    return report;
}

GradCheckReport grad_check(Subnet<double>& net, const Tensor4d& x, const Tensor4d& target,
                           const GradCheckOptions& options) {
    auto grads = std::make_shared<std::vector<ConvGrads<double>>>(net.zero_grads());
    GradCheckProblem problem;
    const std::string& name = net.spec().name;
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        auto& layer = net.layers()[l];
        auto& g = (*grads)[l];
        const std::string prefix = name + ".conv" + std::to_string(l);
        problem.params.push_back({prefix + ".weight", layer.weights, g.weights, net.frozen()});
        problem.params.push_back({prefix + ".bias", layer.bias, g.bias, net.frozen()});
    }
    problem.loss = [&net, &x, &target](std::uint64_t* sig) {
        Subnet<double>::Cache cache;
        auto y = net.forward(x, cache);
        if (sig) *sig = relu_signature<double>(cache);
        return mse_loss(y, target).loss;
    };
    problem.gradient = [&net, &x, &target, grads] {
        for (auto& g : *grads) g.set_zero();
        Subnet<double>::Cache cache;
        auto y = net.forward(x, cache);
        auto loss = mse_loss(y, target);
        net.backward(cache, loss.grad, *grads, false);
    };
    return grad_check(problem, options);
}

}  // namespace saldl::nn
