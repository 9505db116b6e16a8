#pragma once

#include <Eigen/Dense>

namespace flsarb {

// Ordinary least squares, argmin_beta sum (y_t - x_t' beta)^2, via
// column-pivoted QR. Throws InvalidArgument when T < p and DataError naming
// the numerical rank when the design is rank deficient.
Eigen::VectorXd ols_fit(const Eigen::Ref<const Eigen::MatrixXd>& xs,
                        const Eigen::Ref<const Eigen::VectorXd>& ys);

}  // namespace flsarb
