#pragma once

#include <Eigen/Dense>

#include "flsarb/fls.hpp"
#include "flsarb/smoothing.hpp"

namespace flsarb {

// Kalman state for the random-walk coefficient model
//   beta_{t+1} = beta_t + omega_t,  Cov(omega) = state_noise * I
//   y_t = x_t' beta_t + eps_t,       Var(eps)   = obs_noise
struct KfState {
    Eigen::VectorXd beta;
    Eigen::MatrixXd P;
    double state_noise = 0.0;  // V_omega = state_noise * I
    double obs_noise = 1.0;    // V_eps
    long t = 0;
};

struct KfDiagnostics {
    double e = 0.0;  // innovation y - x' beta_{t-1}
    double Q = 0.0;  // one-step forecast variance x' R x + V_eps
    Eigen::VectorXd K;
};

// Inversion-free recursion:
//   R = P + V_omega,  e = y - x' beta,  Q = x' R x + V_eps
//   K = R x / Q,      beta += K e,      P = R - Q K K'
class KalmanFilter {
public:
    KalmanFilter(Eigen::VectorXd beta0, Eigen::MatrixXd P0, double state_noise,
                 double obs_noise = 1.0);

    // FLS-equivalent configuration (V_omega = I / mu, V_eps = 1) with the
    // default diffuse start beta0 = 0, P0 = kappa * I.
    static KalmanFilter fls_equivalent(Eigen::Index p, Smoothing smoothing,
                                       double kappa = kDefaultDiffuseScale);

    // FLS-equivalent configuration whose first prediction covariance matches
    // an FLS prior exactly: R_1 = S0^-1, i.e. P0 = S0^-1 - I / mu and
    // beta0 = S0^-1 s0. S0 must be invertible.
    static KalmanFilter matched_to(const FlsPrior& prior, Smoothing smoothing);

    KfDiagnostics update(const Eigen::Ref<const Eigen::VectorXd>& x, double y);

    const KfState& state() const noexcept { return state_; }
    const Eigen::VectorXd& beta() const noexcept { return state_.beta; }
    const Eigen::MatrixXd& covariance() const noexcept { return state_.P; }
    Eigen::Index dim() const noexcept { return state_.beta.size(); }

private:
    KfState state_;
    Eigen::VectorXd Rx_;
};

}  // namespace flsarb
