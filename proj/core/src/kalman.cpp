#include "flsarb/kalman.hpp"

#include <cassert>
#include <cmath>
#include <utility>

#include "flsarb/error.hpp"

namespace flsarb {

KalmanFilter::KalmanFilter(Eigen::VectorXd beta0, Eigen::MatrixXd P0, double state_noise,
                           double obs_noise) {
    const Eigen::Index p = beta0.size();
    if (p < 1) throw InvalidArgument("dimension must be at least 1");
    if (P0.rows() != p || P0.cols() != p) throw InvalidArgument("P0 must be p x p");
    if (!(state_noise >= 0.0) || !std::isfinite(state_noise)) {
        throw InvalidArgument("state noise must be finite and non-negative");
    }
    if (!(obs_noise > 0.0) || !std::isfinite(obs_noise)) {
        throw InvalidArgument("observation noise must be finite and positive");
    }
    if (!beta0.allFinite() || !P0.allFinite()) throw InvalidArgument("non-finite initial state");
    state_.beta = std::move(beta0);
    state_.P = 0.5 * (P0 + P0.transpose());
    state_.state_noise = state_noise;
    state_.obs_noise = obs_noise;
    Rx_.resize(p);
}

KalmanFilter KalmanFilter::fls_equivalent(Eigen::Index p, Smoothing smoothing, double kappa) {
    if (p < 1) throw InvalidArgument("dimension must be at least 1");
    if (!(kappa > 0.0)) throw InvalidArgument("diffuse prior scale must be positive");
    return KalmanFilter(Eigen::VectorXd::Zero(p), kappa * Eigen::MatrixXd::Identity(p, p),
                        smoothing.state_noise(), 1.0);
}

KalmanFilter KalmanFilter::matched_to(const FlsPrior& prior, Smoothing smoothing) {
    const Eigen::Index p = prior.dim();
    if (p < 1) throw InvalidArgument("dimension must be at least 1");
    Eigen::LDLT<Eigen::MatrixXd> ldlt(prior.S0);
    if (ldlt.info() != Eigen::Success || !(pivot_rcond(ldlt) >= kSingularRcond)) {
        throw InvalidArgument("matched KF start needs an invertible S0");
    }
    Eigen::MatrixXd R1 = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::VectorXd beta0 = ldlt.solve(prior.s0);
    R1.diagonal().array() -= smoothing.state_noise();
    return KalmanFilter(std::move(beta0), std::move(R1), smoothing.state_noise(), 1.0);
}

KfDiagnostics KalmanFilter::update(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
    if (x.size() != dim()) throw InvalidArgument("regressor has wrong dimension");
    if (!x.allFinite() || !std::isfinite(y)) throw InvalidArgument("non-finite observation");

    auto& P = state_.P;
    // P becomes R in place.
    P.diagonal().array() += state_.state_noise;

    KfDiagnostics diag;
    diag.e = y - x.dot(state_.beta);
    Rx_.noalias() = P.selfadjointView<Eigen::Lower>() * x;
    diag.Q = x.dot(Rx_) + state_.obs_noise;
    assert(diag.Q > 0.0);
    diag.K = Rx_ / diag.Q;

    state_.beta.noalias() += diag.K * diag.e;
    // R - Q K K' = R - (R x)(R x)' / Q; lower triangle only, then mirror.
    P.selfadjointView<Eigen::Lower>().rankUpdate(Rx_, -1.0 / diag.Q);
    P.triangularView<Eigen::StrictlyUpper>() = P.transpose().triangularView<Eigen::StrictlyUpper>();
    ++state_.t;
    return diag;
}

}  // namespace flsarb
