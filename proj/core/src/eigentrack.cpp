#include "flsarb/eigentrack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flsarb/error.hpp"

namespace flsarb {
namespace {

// Remove from v its components along q.col(0..count-1), two passes.
void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& q, Eigen::Index count) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < count; ++i) {
            v -= v.dot(q.col(i)) * q.col(i);
        }
    }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0.0) v = -v;
}

}  // namespace

EigenTracker::EigenTracker(Eigen::Index p, Eigen::Index k, EigenTrackerOptions options)
    : p_(p), k_(k), options_(options) {
    if (p < 1) throw InvalidArgument("eigen tracker: dimension must be at least 1");
    if (k < 1 || k > p) throw InvalidArgument("eigen tracker: need 1 <= k <= p");
    if (!(options.amnesia >= 0.0) || !std::isfinite(options.amnesia)) {
        throw InvalidArgument("eigen tracker: amnesia must be finite and non-negative");
    }
    h_.assign(static_cast<std::size_t>(k), Eigen::VectorXd::Zero(p));
    counts_.assign(static_cast<std::size_t>(k), 0);
    q_ = Eigen::MatrixXd::Zero(p, k);
    mean_ = Eigen::VectorXd::Zero(p);
}

void EigenTracker::update(const Eigen::Ref<const Eigen::VectorXd>& r) {
    if (frozen_) return;
    if (r.size() != p_) throw InvalidArgument("eigen tracker: sample has wrong dimension");
    if (!r.allFinite()) throw InvalidArgument("eigen tracker: non-finite sample");

    ++samples_;
    Eigen::VectorXd u = r;
    if (options_.subtract_mean) {
        mean_ += (r - mean_) / static_cast<double>(samples_);
        u -= mean_;
    }

    residuals_.clear();
    const Eigen::Index upto = std::min(active_ + 1, k_);
    for (Eigen::Index j = 0; j < upto; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        auto& h = h_[sj];
        residuals_.push_back(u);

        double norm = h.norm();
        if (j == active_ || norm == 0.0) {
            // Seed (or re-seed after collapse) from the current residual.
            h = u;
            counts_[sj] = 0;
            norm = h.norm();
        }
        if (norm > 0.0) {
            const double n = static_cast<double>(++counts_[sj]);
            const double l = std::min(options_.amnesia, n - 1.0);
            const double along = u.dot(h) / norm;
            h = ((n - 1.0 - l) / n) * h + ((1.0 + l) / n) * along * u;
        }

        Eigen::VectorXd g = h;
        orthogonalize(g, q_, j);
        double gnorm = g.norm();
        if (!(gnorm > 1e-12 * std::max(1.0, h.norm()))) {
            // h is (numerically) inside the span of earlier components; pick the
            // first coordinate axis with a component outside that span.
            for (Eigen::Index axis = 0; axis < p_; ++axis) {
                g = Eigen::VectorXd::Unit(p_, axis);
                orthogonalize(g, q_, j);
                gnorm = g.norm();
                if (gnorm > 1e-6) break;
            }
        }
        q_.col(j) = g / gnorm;
        fix_sign(q_.col(j));

        orthogonalize(u, q_, j + 1);
    }
    if (active_ < k_) ++active_;
}

Eigen::VectorXd EigenTracker::project(const Eigen::Ref<const Eigen::VectorXd>& r) const {
    if (!ready()) throw std::logic_error("eigen tracker: projection requested before warm-up completed");
    if (r.size() != p_) throw InvalidArgument("eigen tracker: sample has wrong dimension");
    if (options_.subtract_mean) return q_.transpose() * (r - mean_);
    return q_.transpose() * r;
}

Eigen::MatrixXd EigenTracker::basis() const {
    return q_.leftCols(active_);
}

Eigen::VectorXd EigenTracker::eigenvalues() const {
    Eigen::VectorXd out(active_);
    for (Eigen::Index j = 0; j < active_; ++j) out(j) = h_[static_cast<std::size_t>(j)].norm();
    return out;
}

}  // namespace flsarb
