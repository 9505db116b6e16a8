#include "flsarb/fls.hpp"

#include <cmath>
#include <string>

#include "flsarb/error.hpp"

namespace flsarb {
namespace {

void symmetrize(Eigen::MatrixXd& a) {
    a = 0.5 * (a + a.transpose()).eval();
}

Eigen::LDLT<Eigen::MatrixXd> factor_or_throw(const Eigen::MatrixXd& a, const char* what, long t) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    const double rc = ldlt.info() == Eigen::Success ? pivot_rcond(ldlt) : 0.0;
    if (!(rc >= kSingularRcond)) {
        throw Underdetermined(std::string(what) + " is singular at step " + std::to_string(t) +
                                  " (rcond " + std::to_string(rc) + ")",
                              rc);
    }
    return ldlt;
}

}  // namespace

FlsPrior FlsPrior::diffuse(Eigen::Index p, double kappa) {
    if (!(kappa > 0.0)) throw InvalidArgument("diffuse prior scale must be positive");
    return scaled_identity(p, 1.0 / kappa);
}

FlsPrior FlsPrior::zero(Eigen::Index p) {
    return scaled_identity(p, 0.0);
}

FlsPrior FlsPrior::scaled_identity(Eigen::Index p, double scale) {
    if (p < 1) throw InvalidArgument("dimension must be at least 1");
    if (!(scale >= 0.0)) throw InvalidArgument("prior scale must be non-negative");
    return {scale * Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd::Zero(p)};
}

OnlineFls::OnlineFls(const FlsPrior& prior, Smoothing smoothing) : smoothing_(smoothing) {
    const Eigen::Index p = prior.dim();
    if (p < 1) throw InvalidArgument("dimension must be at least 1");
    if (prior.S0.rows() != p || prior.S0.cols() != p) {
        throw InvalidArgument("prior S0 must be p x p");
    }
    state_.S = prior.S0;
    symmetrize(state_.S);
    state_.s = prior.s0;
    state_.r = 0.0;
    state_.beta = Eigen::VectorXd::Zero(p);
    state_.t = 0;
}

const Eigen::VectorXd& OnlineFls::update(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
    update_recorded(x, y);
    return state_.beta;
}

FlsStepRecord OnlineFls::update_recorded(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
    const Eigen::Index p = dim();
    if (x.size() != p) throw InvalidArgument("regressor has wrong dimension");
    if (!x.allFinite() || !std::isfinite(y)) throw InvalidArgument("non-finite observation");

    const double mu = smoothing_.mu();
    const long step = state_.t + 1;

    Eigen::MatrixXd info = state_.S;
    info.noalias() += x * x.transpose();
    const Eigen::VectorXd rhs = state_.s + x * y;

    const auto info_f = factor_or_throw(info, "S + x x'", step);
    Eigen::MatrixXd shifted = info;
    shifted.diagonal().array() += mu;
    const auto shifted_f = factor_or_throw(shifted, "S + mu I + x x'", step);

    FlsStepRecord rec;
    rec.d = shifted_f.solve(rhs);
    rec.M = mu * shifted_f.solve(Eigen::MatrixXd::Identity(p, p));
    symmetrize(rec.M);

    state_.beta = info_f.solve(rhs);
    state_.r += y * y - rhs.dot(rec.d);
    state_.S = mu * shifted_f.solve(info);
    symmetrize(state_.S);
    state_.s = mu * rec.d;
    state_.t = step;
    return rec;
}

double OnlineFls::minimized_cost() const {
    const auto& st = state_;
    return st.r + st.beta.dot(st.S * st.beta) - 2.0 * st.beta.dot(st.s);
}

OnlineFls fls_init(Eigen::Index p, Smoothing smoothing, double s0_scale) {
    if (p < 1) throw InvalidArgument("dimension must be at least 1");
    if (!(s0_scale >= 0.0)) throw InvalidArgument("s0_scale must be non-negative");
    return OnlineFls(FlsPrior::scaled_identity(p, s0_scale), smoothing);
}

}  // namespace flsarb
