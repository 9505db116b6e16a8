#include "flsarb/ols.hpp"

#include <string>

#include "flsarb/error.hpp"

namespace flsarb {

Eigen::VectorXd ols_fit(const Eigen::Ref<const Eigen::MatrixXd>& xs,
                        const Eigen::Ref<const Eigen::VectorXd>& ys) {
    const Eigen::Index T = xs.rows();
    const Eigen::Index p = xs.cols();
    if (p < 1) throw InvalidArgument("ols_fit: no regressors");
    if (ys.size() != T) throw InvalidArgument("ols_fit: xs and ys have different lengths");
    if (T < p) {
        throw InvalidArgument("ols_fit: need at least p = " + std::to_string(p) +
                              " observations, got " + std::to_string(T));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    if (qr.rank() < p) {
        throw DataError("ols_fit: design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                        " < " + std::to_string(p) + ")");
    }
    return qr.solve(ys);
}

}  // namespace flsarb
