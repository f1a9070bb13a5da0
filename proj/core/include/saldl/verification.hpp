#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "saldl/filters.hpp"
#include "saldl/image.hpp"
#include "saldl/metrics.hpp"

namespace saldl {

/// One measured invariant compared against its threshold.
struct PropertyCheck {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

struct GradCheckSuiteOptions {
    int networks = 20;
    int joint_cases = 3;
    std::uint64_t seed = 0;
    /// Test fixture: perturbs the first conv layer's weight gradient so the
    /// checker must report a failure.
    bool corrupt_backward = false;
};

/// Finite-difference checks on seeded random tiny subnets (at most 3 blocks,
/// 4 channels, 8x8 inputs, double precision) and on the joint stage-3
/// objective with a frozen GCM feeding the base layer.
std::vector<PropertyCheck> gradcheck_suite(const GradCheckSuiteOptions& options = {});

/// max |(a - b) * k - (a * k - b * k)| over random image pairs.
PropertyCheck gcm_identity_check(int pairs, std::uint64_t seed, const Kernel& gaussian,
                                 double tolerance = 1e-10);

struct NarrowingRow {
    std::string name;
    ResidualStats additive;
    ResidualStats gcm;
    double std_ratio = 0.0;    // gcm / additive
    double width_ratio = 0.0;  // gcm / additive, central 99% mass
    bool passed = false;
};

/// Halftones each image and compares GCM against additive residual spread.
std::vector<NarrowingRow> narrowing_check(const std::vector<std::pair<std::string, GrayImage>>& images,
                                          const Kernel& gaussian);

}  // namespace saldl
