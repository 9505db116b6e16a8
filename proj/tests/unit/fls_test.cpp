#include <random>

#include <gtest/gtest.h>

#include "flsarb/error.hpp"
#include "flsarb/fls.hpp"
#include "flsarb/kalman.hpp"
#include "oracle.hpp"

using namespace flsarb;
using flsarb::testing::dense_fls_minimizer;
using flsarb::testing::prior_cost;
using flsarb::testing::random_matrix;
using flsarb::testing::random_vector;

TEST(FlsInit, ZeroPrior) {
    const auto fls = fls_init(2, Smoothing::from_delta(0.5), 0.0);
    EXPECT_TRUE(fls.state().S.isZero(0.0));
    EXPECT_TRUE(fls.state().s.isZero(0.0));
    EXPECT_TRUE(fls.beta().isZero(0.0));
    EXPECT_EQ(fls.state().r, 0.0);
    EXPECT_EQ(fls.state().t, 0);
}

TEST(FlsInit, ScaledPrior) {
    const auto fls = fls_init(1, Smoothing::from_delta(0.98), 1e-8);
    EXPECT_EQ(fls.state().S(0, 0), 1e-8);
    EXPECT_NEAR(fls.smoothing().mu(), 0.020408163265306, 1e-14);
}

TEST(FlsInit, RejectsBadArguments) {
    EXPECT_THROW(fls_init(0, Smoothing::from_delta(0.5), 0.0), InvalidArgument);
    EXPECT_THROW(fls_init(2, Smoothing::from_delta(0.5), -1.0), InvalidArgument);
}

TEST(FlsUpdate, FirstScalarObservationIsExactFit) {
    auto fls = fls_init(1, Smoothing::from_delta(0.5), 0.0);
    fls.update(Eigen::VectorXd::Constant(1, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(fls.beta()(0), 2.0);
    EXPECT_EQ(fls.state().t, 1);
}

TEST(FlsUpdate, UnderdeterminedFirstStepLeavesStateIntact) {
    auto fls = fls_init(2, Smoothing::from_delta(0.5), 0.0);
    Eigen::Vector2d x(1.0, 2.0);
    try {
        fls.update(x, 1.0);
        FAIL() << "expected Underdetermined";
    } catch (const Underdetermined& e) {
        EXPECT_LT(e.rcond(), kSingularRcond);
    }
    EXPECT_EQ(fls.state().t, 0);
    EXPECT_TRUE(fls.state().S.isZero(0.0));

    // The diffuse default resolves the same step.
    OnlineFls diffuse(FlsPrior::diffuse(2), Smoothing::from_delta(0.5));
    EXPECT_NO_THROW(diffuse.update(x, 1.0));
    EXPECT_TRUE(diffuse.beta().allFinite());
}

TEST(FlsUpdate, RejectsBadObservations) {
    OnlineFls fls(FlsPrior::diffuse(2), Smoothing::from_delta(0.5));
    EXPECT_THROW(fls.update(Eigen::VectorXd::Ones(3), 1.0), InvalidArgument);
    EXPECT_THROW(fls.update(Eigen::Vector2d(1.0, NAN), 1.0), InvalidArgument);
}

TEST(FlsUpdate, OnlineTerminalMatchesDenseMinimizer) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const auto xs = random_matrix(rng, 5, 2);
        const auto ys = random_vector(rng, 5);
        const auto prior = FlsPrior::scaled_identity(2, 0.1);
        const auto sm = Smoothing::from_delta(0.5);
        OnlineFls fls(prior, sm);
        for (int t = 0; t < 5; ++t) fls.update(xs.row(t).transpose(), ys(t));
        const auto oracle = dense_fls_minimizer(xs, ys, sm.mu(), prior);
        EXPECT_LT((fls.beta() - oracle.row(4).transpose()).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(FlsUpdate, StateInvariantsHoldEveryStep) {
    std::mt19937_64 rng(5);
    const Eigen::Index p = 3;
    OnlineFls fls(FlsPrior::scaled_identity(p, 0.5), Smoothing::from_delta(0.3));
    for (int t = 0; t < 50; ++t) {
        fls.update(random_vector(rng, p), random_vector(rng, 1)(0));
        const auto& st = fls.state();
        EXPECT_TRUE(st.S.isApprox(st.S.transpose(), 0.0));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.S);
        EXPECT_GE(es.eigenvalues().minCoeff(), 0.0);
        const Eigen::VectorXd implied = st.S.ldlt().solve(st.s);
        EXPECT_LT((implied - st.beta).norm(), 1e-10 * (1.0 + st.beta.norm()));
    }
}

TEST(FlsUpdate, MinimizedCostMatchesOracleCost) {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::Index T = 3 + rep % 10, p = 1 + rep % 3;
        const auto xs = random_matrix(rng, T, p);
        const auto ys = random_vector(rng, T);
        const auto prior = FlsPrior::scaled_identity(p, 0.25);
        const auto sm = Smoothing::from_delta(0.2 + 0.03 * rep);
        OnlineFls fls(prior, sm);
        for (Eigen::Index t = 0; t < T; ++t) fls.update(xs.row(t).transpose(), ys(t));
        const auto path = dense_fls_minimizer(xs, ys, sm.mu(), prior);
        const double expect = prior_cost(xs, ys, path, sm.mu(), prior);
        EXPECT_NEAR(fls.minimized_cost(), expect, 1e-6 * std::abs(expect));
    }
}

TEST(FlsUpdate, InverseCurvatureFollowsKalmanPredictionCovariance) {
    // S_t^-1 from the FLS recursion equals R_{t+1} = P_t + I/mu of the KF.
    std::mt19937_64 rng(8);
    for (Eigen::Index p : {1, 2, 3, 5}) {
        const auto sm = Smoothing::from_delta(0.4);
        const auto prior = FlsPrior::scaled_identity(p, 2.0);
        OnlineFls fls(prior, sm);
        auto kf = KalmanFilter::matched_to(prior, sm);
        for (int t = 0; t < 30; ++t) {
            const auto x = random_vector(rng, p);
            const double y = random_vector(rng, 1)(0);
            fls.update(x, y);
            kf.update(x, y);
            const Eigen::MatrixXd s_inv = fls.state().S.inverse();
            Eigen::MatrixXd r_next = kf.covariance();
            r_next.diagonal().array() += sm.state_noise();
            EXPECT_LT((s_inv - r_next).cwiseAbs().maxCoeff(), 1e-9 * (1.0 + r_next.cwiseAbs().maxCoeff()));
        }
    }
}
