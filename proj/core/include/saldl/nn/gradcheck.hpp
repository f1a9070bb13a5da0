#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "saldl/nn/subnet.hpp"

namespace saldl::nn {

/// One block of parameters exposed to the checker. `grads` must be filled by
/// the problem's gradient callback for the current `values`.
struct ParamGroup {
    std::string name;
    std::span<double> values;
    std::span<const double> grads;
    bool frozen = false;
};

/// A scalar loss over a set of parameter groups. `loss` evaluates the
/// objective at the current values and may report an activation signature
/// (ReLU pattern hash) so probes crossing a kink can be skipped.
struct GradCheckProblem {
    std::vector<ParamGroup> params;
    std::function<double(std::uint64_t* signature)> loss;
    std::function<void()> gradient;
};

struct GradCheckOptions {
    double epsilon = 1e-5;
    /// 0 checks every parameter; otherwise at most this many per group,
    /// sampled with the seed below.
    std::size_t samples_per_group = 0;
    std::uint64_t seed = 0;
};

struct GradCheckReport {
    /// max |analytic - central| / max(|analytic|, |central|, 1e-8)
    double max_relative_error = 0.0;
    std::string worst_parameter;
    std::size_t checked = 0;
    std::size_t skipped_kinks = 0;
    std::vector<std::string> excluded_frozen;
};

GradCheckReport grad_check(GradCheckProblem& problem, const GradCheckOptions& options = {});

/// Convenience: checks an MSE-to-target loss through a single subnet.
GradCheckReport grad_check(Subnet<double>& net, const Tensor4d& x, const Tensor4d& target,
                           const GradCheckOptions& options = {});

}  // namespace saldl::nn
