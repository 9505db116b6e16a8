#pragma once

#include <vector>

#include <Eigen/Dense>

namespace flsarb {

struct EigenTrackerOptions {
    // CCIPCA amnesia l: weights ((n-1-l)/n, (1+l)/n). 0 gives the plain
    // running average. Clamped to n-1 while a component is young.
    double amnesia = 0.0;
    // Track the covariance of (r - running mean) instead of E(r r').
    bool subtract_mean = false;
};

// Streaming estimate of the k leading eigenvectors of E(r r').
//
// Component j keeps an unnormalized estimate h_j of lambda_j g_j updated by
//   h <- (n-1)/n h + 1/n u u' h / |h|
// where u is the input after removing its projection on components 1..j-1
// and n counts the samples since the component was seeded. Component j is
// seeded (h = u) by the j-th sample. The exposed basis is the Gram-Schmidt
// orthonormalization of h_1..h_k in order, sign-fixed so the largest-magnitude
// entry of each vector is positive; eigenvalue estimates are |h_j|.
class EigenTracker {
public:
    // Throws InvalidArgument unless 1 <= k <= p.
    EigenTracker(Eigen::Index p, Eigen::Index k, EigenTrackerOptions options = {});

    // No-op while frozen. Throws InvalidArgument on wrong size or non-finite r.
    void update(const Eigen::Ref<const Eigen::VectorXd>& r);

    // (g_1' r, ..., g_k' r) on the centered input. Throws std::logic_error
    // before every component is active.
    Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& r) const;

    bool ready() const noexcept { return active_ == k_; }
    Eigen::Index active() const noexcept { return active_; }
    Eigen::Index dim() const noexcept { return p_; }
    Eigen::Index components() const noexcept { return k_; }
    long samples() const noexcept { return samples_; }

    void freeze(bool frozen) noexcept { frozen_ = frozen; }
    bool frozen() const noexcept { return frozen_; }

    // p x active() orthonormal, sign-fixed basis.
    Eigen::MatrixXd basis() const;
    Eigen::VectorXd eigenvalues() const;
    // Raw estimate h_j (unnormalized, not orthogonalized).
    const Eigen::VectorXd& raw(Eigen::Index j) const { return h_[static_cast<std::size_t>(j)]; }
    const Eigen::VectorXd& mean() const noexcept { return mean_; }

    // Residuals fed to each active component during the last update; entry j
    // is orthogonal to basis columns 0..j-1.
    const std::vector<Eigen::VectorXd>& last_residuals() const noexcept { return residuals_; }

private:
    Eigen::Index p_;
    Eigen::Index k_;
    EigenTrackerOptions options_;
    std::vector<Eigen::VectorXd> h_;
    std::vector<long> counts_;
    Eigen::MatrixXd q_;  // p x k, columns 0..active_-1 valid
    Eigen::VectorXd mean_;
    std::vector<Eigen::VectorXd> residuals_;
    Eigen::Index active_ = 0;
    long samples_ = 0;
    bool frozen_ = false;
};

}  // namespace flsarb
