#pragma once

#include <Eigen/Dense>

#include "flsarb/smoothing.hpp"

namespace flsarb {

// Default diffuse prior scale: KF path P0 = kappa * I, FLS path S0 = I / kappa.
inline constexpr double kDefaultDiffuseScale = 1e6;

// Linear solves whose reciprocal condition number falls below this are
// reported as Underdetermined.
inline constexpr double kSingularRcond = 1e-14;

// Ratio of smallest to largest |pivot| of an LDLT factorization. Zero for a
// singular or indefinite-with-zero-pivot matrix; a cheap stand-in for rcond.
inline double pivot_rcond(const Eigen::LDLT<Eigen::MatrixXd>& ldlt) {
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    const double hi = d.maxCoeff();
    if (!(hi > 0.0)) return 0.0;
    return d.minCoeff() / hi;
}

// Quadratic prior on the first coefficient vector:
// beta' S0 beta - 2 beta' s0.
struct FlsPrior {
    Eigen::MatrixXd S0;
    Eigen::VectorXd s0;

    static FlsPrior diffuse(Eigen::Index p, double kappa = kDefaultDiffuseScale);
    static FlsPrior zero(Eigen::Index p);
    static FlsPrior scaled_identity(Eigen::Index p, double scale);

    Eigen::Index dim() const noexcept { return s0.size(); }
};

// Forward-recursion state of the minimized incompatibility cost
// c(beta) = beta' S beta - 2 beta' s + r, plus the current estimate.
struct FlsState {
    Eigen::MatrixXd S;
    Eigen::VectorXd s;
    double r = 0.0;
    Eigen::VectorXd beta;
    long t = 0;
};

// One forward step's smoother coefficients: beta_t = d + M beta_{t+1}.
struct FlsStepRecord {
    Eigen::VectorXd d;
    Eigen::MatrixXd M;
};

// Inversion-based on-line flexible least squares.
//
// Each update solves two symmetric systems:
//   beta_t = (S + x x')^-1 (s + x y)
//   A      = S + mu I + x x'
//   S'     = mu A^-1 (S + x x'),  s' = mu A^-1 (s + x y)
//   r'     = r + y^2 - (s + x y)' A^-1 (s + x y)
// The KalmanFilter produces the same estimates without any inversion and is
// the production path; this class is kept for equivalence checks and as the
// forward half of the off-line smoother.
class OnlineFls {
public:
    OnlineFls(const FlsPrior& prior, Smoothing smoothing);

    // Throws Underdetermined if S + x x' is numerically singular; the state
    // is left untouched in that case.
    const Eigen::VectorXd& update(const Eigen::Ref<const Eigen::VectorXd>& x, double y);

    // Same as update(), also returning the smoother record of this step.
    FlsStepRecord update_recorded(const Eigen::Ref<const Eigen::VectorXd>& x, double y);

    const FlsState& state() const noexcept { return state_; }
    const Eigen::VectorXd& beta() const noexcept { return state_.beta; }
    const Smoothing& smoothing() const noexcept { return smoothing_; }
    Eigen::Index dim() const noexcept { return state_.s.size(); }

    // min over beta of the current cost-to-go, r - s' S^-1 s, evaluated at the
    // current estimate. Equals the minimized incompatibility cost (including
    // the prior term) over all observations consumed so far.
    double minimized_cost() const;

private:
    Smoothing smoothing_;
    FlsState state_;
};

// Convenience constructor: S0 = s0_scale * I, s0 = 0.
// Throws InvalidArgument for p == 0 or negative s0_scale.
OnlineFls fls_init(Eigen::Index p, Smoothing smoothing, double s0_scale);

}  // namespace flsarb
