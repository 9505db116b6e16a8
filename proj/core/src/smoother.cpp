#include "flsarb/smoother.hpp"

#include <string>

#include "flsarb/error.hpp"

namespace flsarb {

SmoothedPath fls_smooth_batch(const Eigen::Ref<const Eigen::MatrixXd>& xs,
                              const Eigen::Ref<const Eigen::VectorXd>& ys, Smoothing smoothing,
                              const FlsPrior& prior) {
    const Eigen::Index T = xs.rows();
    const Eigen::Index p = xs.cols();
    if (T < 1) throw InvalidArgument("need at least one observation");
    if (ys.size() != T) throw InvalidArgument("xs and ys have different lengths");
    if (prior.dim() != p) throw InvalidArgument("prior dimension does not match regressors");

    OnlineFls forward(prior, smoothing);
    SmoothedPath out;
    out.tape.steps.reserve(static_cast<std::size_t>(T));
    for (Eigen::Index t = 0; t < T; ++t) {
        out.tape.steps.push_back(forward.update_recorded(xs.row(t).transpose(), ys(t)));
    }

    out.beta.resize(T, p);
    // The on-line estimate at T is the terminal smoothed value.
    out.beta.row(T - 1) = forward.beta().transpose();
    for (Eigen::Index t = T - 2; t >= 0; --t) {
        const auto& rec = out.tape.steps[static_cast<std::size_t>(t)];
        out.beta.row(t) = (rec.d + rec.M * out.beta.row(t + 1).transpose()).transpose();
    }
    return out;
}

double path_roughness(const Eigen::Ref<const Eigen::MatrixXd>& path) {
    if (path.rows() < 2) return 0.0;
    const Eigen::Index T = path.rows();
    return (path.bottomRows(T - 1) - path.topRows(T - 1)).squaredNorm();
}

double incompatibility_cost(const Eigen::Ref<const Eigen::MatrixXd>& xs,
                            const Eigen::Ref<const Eigen::VectorXd>& ys,
                            const Eigen::Ref<const Eigen::MatrixXd>& path, double mu) {
    if (xs.rows() != ys.size() || path.rows() != xs.rows() || path.cols() != xs.cols()) {
        throw InvalidArgument("incompatibility_cost: shape mismatch");
    }
    const Eigen::VectorXd fitted = (xs.array() * path.array()).rowwise().sum();
    return (ys - fitted).squaredNorm() + mu * path_roughness(path);
}

}  // namespace flsarb
