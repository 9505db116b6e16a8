#pragma once

#include <vector>

#include <Eigen/Dense>

#include "flsarb/fls.hpp"
#include "flsarb/smoothing.hpp"

namespace flsarb {

// Forward-pass records (d_t, M_t), one per observation. The last record is
// not used by the backward pass.
struct SmootherTape {
    std::vector<FlsStepRecord> steps;
    std::size_t size() const noexcept { return steps.size(); }
};

struct SmoothedPath {
    Eigen::MatrixXd beta;  // T x p, row t is the smoothed beta_{t+1}
    SmootherTape tape;     // T records
};

// Off-line FLS: forward recursion over all T observations, terminal solve
// beta_T = (S_{T-1} + x_T x_T')^-1 (s_{T-1} + x_T y_T), then the backward pass
// beta_t = d_t + M_t beta_{t+1}. The result minimizes
//   prior(beta_1) + sum (y_t - x_t' beta_t)^2 + mu sum |beta_{t+1} - beta_t|^2.
// Throws Underdetermined when the forward solves or the terminal system are
// singular.
SmoothedPath fls_smooth_batch(const Eigen::Ref<const Eigen::MatrixXd>& xs,
                              const Eigen::Ref<const Eigen::VectorXd>& ys, Smoothing smoothing,
                              const FlsPrior& prior);

// Sum of squared increments, sum_t |beta_{t+1} - beta_t|^2, of a T x p path.
double path_roughness(const Eigen::Ref<const Eigen::MatrixXd>& path);

// Incompatibility cost of a path: squared residuals plus mu times the
// roughness. The prior term is not included.
double incompatibility_cost(const Eigen::Ref<const Eigen::MatrixXd>& xs,
                            const Eigen::Ref<const Eigen::VectorXd>& ys,
                            const Eigen::Ref<const Eigen::MatrixXd>& path, double mu);

}  // namespace flsarb
