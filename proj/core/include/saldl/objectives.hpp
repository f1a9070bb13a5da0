#pragma once

#include <cstdint>
#include <vector>

#include "saldl/networks.hpp"
#include "saldl/nn/subnet.hpp"

namespace saldl {

// Loss + backward for each training stage, templated so the float training
// path and the double gradient checker share one implementation.

/// ||net(x) - target||^2 / M; stages 1 and 2.
template <class T>
double regression_objective(const nn::Subnet<T>& net, const nn::Tensor4<T>& x,
                            const nn::Tensor4<T>& target, std::vector<nn::ConvGrads<T>>* grads,
                            std::uint64_t* signature = nullptr);

template <class T>
struct JointGrads {
    std::vector<nn::ConvGrads<T>> irs;
    std::vector<nn::ConvGrads<T>> head;
    std::vector<nn::ConvGrads<T>> sards;
};

struct JointLoss {
    double total = 0.0;
    double detail = 0.0;
    double laplacian = 0.0;
};

/// Stage-3 multi-loss: laplacian = head(irs(halftone)),
/// detail = sards(base, laplacian, halftone),
/// L = (1/M) sum w_d ||detail - detail_target||^2 + w_l ||laplacian - laplacian_target||^2.
/// Gradients reach SARDS, the ISMP head, and the IRS; none flow into base.
template <class T>
JointLoss joint_objective(const nn::Subnet<T>& irs, const nn::Subnet<T>& head,
                          const nn::Subnet<T>& sards, const nn::Tensor4<T>& base,
                          const nn::Tensor4<T>& halftone, const nn::Tensor4<T>& detail_target,
                          const nn::Tensor4<T>& laplacian_target, double omega_detail,
                          double omega_laplacian, JointGrads<T>* grads,
                          std::uint64_t* signature = nullptr);

/// Baselines read (base, halftone). DDN regresses the original directly;
/// PRL regresses the detail target (original - base).
template <class T>
double baseline_objective(const nn::Subnet<T>& net, const nn::Tensor4<T>& base,
                          const nn::Tensor4<T>& halftone, const nn::Tensor4<T>& target,
                          std::vector<nn::ConvGrads<T>>* grads, std::uint64_t* signature = nullptr);

}  // namespace saldl
