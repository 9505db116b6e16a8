#include <random>

#include <benchmark/benchmark.h>

#include "flsarb/backtest.hpp"
#include "flsarb/eigentrack.hpp"
#include "flsarb/fls.hpp"
#include "flsarb/ingest.hpp"
#include "flsarb/kalman.hpp"
#include "flsarb/synth.hpp"

using namespace flsarb;

namespace {

// A fixed pool of return-scale observations, cycled through by the loops.
struct Pool {
    Eigen::MatrixXd xs;
    Eigen::VectorXd ys;
};

Pool make_pool(Eigen::Index p, Eigen::Index rows = 256) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 0.01);
    Pool pool{Eigen::MatrixXd(rows, p), Eigen::VectorXd(rows)};
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) pool.xs(i, j) = n(rng);
        pool.ys(i) = n(rng);
    }
    return pool;
}

void BM_KalmanUpdate(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const Pool pool = make_pool(p);
    KalmanFilter kf = KalmanFilter::fls_equivalent(p, Smoothing::from_delta(0.5));
    Eigen::Index i = 0;
    for (auto _ : state) {
        kf.update(pool.xs.row(i).transpose(), pool.ys(i));
        benchmark::DoNotOptimize(kf.beta().data());
        i = (i + 1) % pool.xs.rows();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KalmanUpdate)->Arg(3)->Arg(10)->Arg(50)->Arg(432);

void BM_OnlineFlsUpdate(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const Pool pool = make_pool(p);
    OnlineFls fls(FlsPrior::diffuse(p), Smoothing::from_delta(0.5));
    Eigen::Index i = 0;
    for (auto _ : state) {
        fls.update(pool.xs.row(i).transpose(), pool.ys(i));
        benchmark::DoNotOptimize(fls.beta().data());
        i = (i + 1) % pool.xs.rows();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OnlineFlsUpdate)->Arg(3)->Arg(10)->Arg(50);

void BM_EigenTrackerUpdate(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const Eigen::Index k = state.range(1);
    const Pool pool = make_pool(p);
    EigenTracker tracker(p, k);
    Eigen::Index i = 0;
    for (auto _ : state) {
        tracker.update(pool.xs.row(i).transpose());
        benchmark::DoNotOptimize(tracker.raw(0).data());
        i = (i + 1) % pool.xs.rows();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EigenTrackerUpdate)->Args({10, 3})->Args({432, 3})->Args({432, 10});

void BM_Backtest(benchmark::State& state) {
    MarketConfig cfg;
    cfg.T = 1000;
    cfg.streams = static_cast<int>(state.range(0));
    const MarketData m = gen_market(cfg);
    const ReturnMatrix returns = to_log_returns(m.prices);
    const Eigen::VectorXd index = m.prices.target();
    BacktestConfig bt;
    bt.features = FeatureConfig::parse(state.range(1) ? "svd:3" : "raw");
    for (auto _ : state) {
        const auto res = run_backtest(returns, index, bt);
        benchmark::DoNotOptimize(res.ledger.rows.data());
    }
    state.SetItemsProcessed(state.iterations() * returns.rows());
}
BENCHMARK(BM_Backtest)->Args({10, 0})->Args({10, 1})->Args({100, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
