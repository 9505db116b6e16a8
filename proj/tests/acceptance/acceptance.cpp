// Acceptance gate. Each criterion prints one PASS/FAIL line with the measured
// quantities; `--criterion N` runs a single one, no argument runs all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "flsarb/backtest.hpp"
#include "flsarb/eigentrack.hpp"
#include "flsarb/fls.hpp"
#include "flsarb/ingest.hpp"
#include "flsarb/kalman.hpp"
#include "flsarb/metrics.hpp"
#include "flsarb/ols.hpp"
#include "flsarb/smoother.hpp"
#include "flsarb/synth.hpp"
#include "oracle.hpp"

using namespace flsarb;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1
Outcome fls_kf_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> delta_dist(0.05, 0.95);
    std::normal_distribution<double> n01;
    const Eigen::Index dims[] = {1, 2, 4, 8};
    const int T = 200;
    double worst = 0.0, worst_norm = 0.0;
    for (int stream = 0; stream < 200; ++stream) {
        const Eigen::Index p = dims[stream % 4];
        const auto smoothing = Smoothing::from_delta(delta_dist(rng));
        const FlsPrior prior = FlsPrior::diffuse(p);
        OnlineFls fls(prior, smoothing);
        KalmanFilter kf = KalmanFilter::matched_to(prior, smoothing);
        Eigen::VectorXd beta = testing::random_vector(rng, p);
        for (int t = 0; t < T; ++t) {
            beta += 0.1 * testing::random_vector(rng, p);
            const Eigen::VectorXd x = testing::random_vector(rng, p);
            const double y = x.dot(beta) + n01(rng);
            fls.update(x, y);
            kf.update(x, y);
            worst_norm = std::max(worst_norm, (fls.beta() - kf.beta()).cwiseAbs().maxCoeff() /
                                                  fls.beta().cwiseAbs().maxCoeff());
            for (Eigen::Index i = 0; i < p; ++i) {
                const double a = fls.beta()(i), b = kf.beta()(i);
                const double scale = std::max(std::abs(a), std::abs(b));
                if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 10.0,
            "max element-wise relative deviation " + fmt("%.3g", worst) + " (limit 1e-9); relative to |beta_t|inf " +
                fmt("%.3g", worst_norm) + "; " + fmt("%.2f", secs) + " s"};
}

// ---------------------------------------------------------------- 2
Outcome batch_oracle() {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> T_dist(2, 20), p_dist(1, 3);
    const double deltas[] = {0.2, 0.5, 0.9};
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const int T = T_dist(rng);
        const int p = p_dist(rng);
        const double mu = Smoothing::from_delta(deltas[inst % 3]).mu();
        const Eigen::MatrixXd xs = testing::random_matrix(rng, T, p);
        const Eigen::VectorXd ys = testing::random_vector(rng, T, 2.0);
        // Proper random prior so short samples stay well posed.
        const Eigen::MatrixXd A = testing::random_matrix(rng, p, p);
        FlsPrior prior{A * A.transpose() + 0.5 * Eigen::MatrixXd::Identity(p, p), testing::random_vector(rng, p)};
        const SmoothedPath path = fls_smooth_batch(xs, ys, Smoothing::from_delta(deltas[inst % 3]), prior);
        const Eigen::MatrixXd direct = testing::dense_fls_minimizer(xs, ys, mu, prior);
        worst = std::max(worst, (path.beta - direct).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-8, "max |smoothed - direct minimizer| " + fmt("%.3g", worst) + " (limit 1e-8)"};
}

// ---------------------------------------------------------------- 3
Outcome ols_limit() {
    // Fixed data at daily-return scale: regressors ~1%, noise ~0.5%.
    std::mt19937_64 rng(303);
    const Eigen::Index T = 500, p = 3;
    const Eigen::MatrixXd xs = 0.01 * testing::random_matrix(rng, T, p);
    const Eigen::VectorXd ys = xs * Eigen::Vector3d(1.0, -2.0, 0.5) + testing::random_vector(rng, T, 0.005);
    const Eigen::VectorXd ols = ols_fit(xs, ys);
    std::vector<double> gaps;
    for (double d : {0.1, 0.01, 0.001}) {
        auto kf = KalmanFilter::fls_equivalent(p, Smoothing::from_delta(d));
        for (Eigen::Index t = 0; t < T; ++t) kf.update(xs.row(t).transpose(), ys(t));
        gaps.push_back((kf.beta() - ols).cwiseAbs().maxCoeff());
    }
    const bool monotone = gaps[0] > gaps[1] && gaps[1] > gaps[2];
    return {monotone && gaps[2] <= 1e-2, "gaps " + fmt("%.3g", gaps[0]) + " > " + fmt("%.3g", gaps[1]) + " > " +
                                             fmt("%.3g", gaps[2]) + " (final limit 1e-2)"};
}

// ---------------------------------------------------------------- 4
Outcome fig2_replication() {
    const auto t0 = Clock::now();
    const double delta = 0.98;
    const auto smoothing = Smoothing::from_delta(delta);
    int ok_walk = 0, ok_jump = 0, ok_sine = 0, ok_cost = 0;
    double worst_walk = 0.0, worst_sine = 0.0;
    const int seeds = 20;
    for (int seed = 1; seed <= seeds; ++seed) {
        Fig2Config cfg;
        cfg.seed = static_cast<std::uint64_t>(seed);
        const Fig2Data d = gen_fig2(cfg);
        const FlsPrior prior = FlsPrior::diffuse(1);
        KalmanFilter kf = KalmanFilter::matched_to(prior, smoothing);
        Eigen::VectorXd online(cfg.T);
        for (int t = 0; t < cfg.T; ++t) {
            kf.update(Eigen::VectorXd::Constant(1, d.x(t)), d.y(t));
            online(t) = kf.beta()(0);
        }
        const Eigen::VectorXd offline = fls_smooth_batch(d.x, d.y, smoothing, prior).beta.col(0);

        auto rmse = [&](int first, int last) {  // 1-based inclusive
            double s = 0.0;
            for (int t = first; t <= last; ++t) s += std::pow(online(t - 1) - d.beta(t - 1), 2);
            return std::sqrt(s / (last - first + 1));
        };
        const double walk = rmse(1, cfg.jump_t - 1);
        const double sine = rmse(cfg.sine_from, cfg.T);
        bool recovered = false;
        for (int t = cfg.jump_t; t <= cfg.jump_t + 10; ++t) {
            if (std::abs(online(t - 1) - d.beta(t - 1)) <= 1.0) recovered = true;
        }
        double rough_on = 0.0, rough_off = 0.0;
        for (int t = 1; t < cfg.T; ++t) {
            rough_on += std::pow(online(t) - online(t - 1), 2);
            rough_off += std::pow(offline(t) - offline(t - 1), 2);
        }
        ok_walk += walk <= 1.5;
        ok_sine += sine <= 1.5;
        ok_jump += recovered;
        ok_cost += rough_off <= rough_on;
        worst_walk = std::max(worst_walk, walk);
        worst_sine = std::max(worst_sine, sine);
    }
    const double secs = seconds_since(t0);
    const bool pass = ok_walk == seeds && ok_sine == seeds && ok_jump == seeds && ok_cost == seeds && secs < 5.0;
    std::ostringstream s;
    s << "seeds passing: walk RMSE<=1.5 " << ok_walk << "/" << seeds << " (worst " << fmt("%.3f", worst_walk)
      << "), jump " << ok_jump << "/" << seeds << ", sine RMSE<=1.5 " << ok_sine << "/" << seeds << " (worst "
      << fmt("%.3f", worst_sine) << "), offline roughness<=online " << ok_cost << "/" << seeds << ", "
      << fmt("%.2f", secs) << " s";
    return {pass, s.str()};
}

// ---------------------------------------------------------------- 5
double angle_to_axis(const Eigen::VectorXd& g, Eigen::Index axis) {
    return testing::angle_deg(g, Eigen::VectorXd::Unit(g.size(), axis));
}

Outcome eigen_tracking() {
    const Eigen::Index p = 8, k = 3;
    Eigen::VectorXd sd(p);
    sd << 2.0, 1.0, 0.5, 0.1, 0.1, 0.1, 0.1, 0.1;  // variances 4, 1, 0.25, then 0.01 padding
    double worst_angle[3] = {0.0, 0.0, 0.0};
    double worst_orth = 0.0;
    for (int seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(500 + seed);
        std::normal_distribution<double> n01;
        EigenTracker tr(p, k);
        for (int n = 0; n < 5000; ++n) {
            Eigen::VectorXd r(p);
            for (Eigen::Index i = 0; i < p; ++i) r(i) = sd(i) * n01(rng);
            tr.update(r);
            const Eigen::MatrixXd Q = tr.basis();
            const Eigen::Index a = Q.cols();
            worst_orth = std::max(worst_orth,
                                  (Q.transpose() * Q - Eigen::MatrixXd::Identity(a, a)).cwiseAbs().maxCoeff());
            const auto& res = tr.last_residuals();
            for (std::size_t j = 1; j < res.size(); ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    const double c = std::abs(res[j].dot(Q.col(static_cast<Eigen::Index>(i))));
                    worst_orth = std::max(worst_orth, c / std::max(1.0, res[0].norm()));
                }
            }
        }
        const Eigen::MatrixXd Q = tr.basis();
        for (Eigen::Index j = 0; j < k; ++j) worst_angle[j] = std::max(worst_angle[j], angle_to_axis(Q.col(j), j));
    }

    // Explicit running average for the leading component:
    //   h_n = (1/n) sum_i u_i u_i' h_{i-1} / |h_{i-1}|,  h_0 = u_1.
    double worst_avg = 0.0;
    {
        std::mt19937_64 rng(599);
        std::normal_distribution<double> n01;
        EigenTracker tr(p, k);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd h;
        for (int n = 1; n <= 200; ++n) {
            Eigen::VectorXd r(p);
            for (Eigen::Index i = 0; i < p; ++i) r(i) = sd(i) * n01(rng);
            tr.update(r);
            if (n == 1) h = r;
            sum += r * r.dot(h) / h.norm();
            h = sum / static_cast<double>(n);
            worst_avg = std::max(worst_avg, (tr.raw(0) - h).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff());
        }
    }
    const bool pass = worst_angle[0] < 5.0 && worst_angle[1] < 10.0 && worst_angle[2] < 10.0 &&
                      worst_orth <= 1e-10 && worst_avg <= 1e-12;
    std::ostringstream s;
    s << "worst angles " << fmt("%.2f", worst_angle[0]) << "/" << fmt("%.2f", worst_angle[1]) << "/"
      << fmt("%.2f", worst_angle[2]) << " deg (limits 5/10/10), orthogonality " << fmt("%.2g", worst_orth)
      << " (limit 1e-10), explicit-average deviation " << fmt("%.2g", worst_avg) << " (limit 1e-12)";
    return {pass, s.str()};
}

// ---------------------------------------------------------------- 6
struct Market {
    ReturnMatrix returns;
    Eigen::VectorXd index;
};

Market make_market(std::uint64_t seed, int T, int streams, double spread_sd = 0.005) {
    MarketConfig cfg;
    cfg.seed = seed;
    cfg.T = T;
    cfg.streams = streams;
    cfg.spread_sd = spread_sd;
    const MarketData m = gen_market(cfg);
    return {to_log_returns(m.prices), m.prices.target()};
}

bool same_row(const LedgerRow& a, const LedgerRow& b) {
    return a.date == b.date && a.index_price == b.index_price && a.spread == b.spread && a.signal == b.signal &&
           a.order == b.order && a.position == b.position && a.pnl == b.pnl && a.cum_pnl == b.cum_pnl;
}

Outcome ledger_integrity() {
    int lookahead_fail = 0, cum_fail = 0, anti_fail = 0;
    std::int64_t worst_pos_residue = 0;
    for (int m = 0; m < 100; ++m) {
        std::mt19937_64 rng(600 + m);
        const int T = 150;
        const Market mk = make_market(static_cast<std::uint64_t>(600 + m), T, 2 + m % 5);
        BacktestConfig cfg;
        cfg.smoothing = Smoothing::from_delta(0.1 + 0.8 * (m % 9) / 8.0);
        cfg.features = FeatureConfig::parse(m % 2 ? "raw" : "svd:2");
        cfg.warmup_rows = 10;
        const BacktestResult base = run_backtest(mk.returns, mk.index, cfg);
        const auto& rows = base.ledger.rows;

        // Shuffle everything after row t0; rows up to t0 must not move.
        const Eigen::Index n = mk.returns.rows();
        const Eigen::Index t0 = std::uniform_int_distribution<Eigen::Index>(20, n - 10)(rng);
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n - t0 - 1));
        std::iota(perm.begin(), perm.end(), t0 + 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        Market shuffled = mk;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            const Eigen::Index dst = t0 + 1 + static_cast<Eigen::Index>(i);
            shuffled.returns.target(dst) = mk.returns.target(perm[i]);
            shuffled.returns.streams.row(dst) = mk.returns.streams.row(perm[i]);
            shuffled.index(dst + 1) = mk.index(perm[i] + 1);
        }
        const BacktestResult alt = run_backtest(shuffled.returns, shuffled.index, cfg);
        for (Eigen::Index t = 0; t <= t0; ++t) {
            if (!same_row(rows[static_cast<std::size_t>(t)], alt.ledger.rows[static_cast<std::size_t>(t)])) {
                ++lookahead_fail;
                break;
            }
        }

        double cum = 0.0;
        std::int64_t held = 0;
        bool cum_ok = true;
        for (const auto& r : rows) {
            cum += r.pnl;
            held += r.order;
            cum_ok = cum_ok && r.cum_pnl == cum && r.position == held;
        }
        cum_fail += !cum_ok;

        // Mirrored market: negating every return flips each spread, so
        // positions and P&L must flip too.
        Market mirrored = mk;
        mirrored.returns.target = -mk.returns.target;
        mirrored.returns.streams = -mk.returns.streams;
        const BacktestResult flip = run_backtest(mirrored.returns, mirrored.index, cfg);
        bool anti_ok = true;
        for (std::size_t t = 0; t < rows.size(); ++t) {
            const auto& a = rows[t];
            const auto& b = flip.ledger.rows[t];
            const std::int64_t residue = std::abs(a.position + b.position);
            worst_pos_residue = std::max(worst_pos_residue, residue);
            const double dp = t == 0 ? std::abs(a.index_price - mk.index(0))
                                     : std::abs(a.index_price - rows[t - 1].index_price);
            anti_ok = anti_ok && residue <= 1 && std::abs(a.pnl + b.pnl) <= 250.0 * dp + 1e-9;
        }
        anti_fail += !anti_ok;
    }
    std::ostringstream s;
    s << "markets failing: lookahead " << lookahead_fail << "/100, cumulative/position bookkeeping " << cum_fail
      << "/100, sign antisymmetry " << anti_fail << "/100 (worst position residue " << worst_pos_residue
      << " contracts)";
    return {lookahead_fail == 0 && cum_fail == 0 && anti_fail == 0, s.str()};
}

// ---------------------------------------------------------------- 7
Outcome strategy_sanity() {
    const int seeds = 50;
    const Eigen::Index warmup = 100;
    int wins = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
        const Market mk = make_market(static_cast<std::uint64_t>(seed), 1000, 10);
        BacktestConfig cfg;
        cfg.smoothing = Smoothing::from_delta(0.5);
        cfg.warmup_rows = warmup;
        SummaryOptions opts;
        opts.split = static_cast<std::size_t>(warmup);
        const auto fls = summarize(run_backtest(mk.returns, mk.index, cfg).ledger, opts);
        cfg.rule = TradingRule::kBuyAndHold;
        const auto bh = summarize(run_backtest(mk.returns, mk.index, cfg).ledger, opts);
        if (fls.sharpe && (!bh.sharpe || *fls.sharpe > *bh.sharpe)) ++wins;
    }

    // Zero spread volatility: the target is an exact combination of the streams.
    double worst_spread = 0.0;
    for (int seed = 1; seed <= seeds; ++seed) {
        const Market mk = make_market(static_cast<std::uint64_t>(seed), 1000, 10, 0.0);
        BacktestConfig cfg;
        cfg.smoothing = Smoothing::from_delta(0.5);
        cfg.warmup_rows = warmup;
        const auto res = run_backtest(mk.returns, mk.index, cfg);
        for (std::size_t t = static_cast<std::size_t>(warmup); t < res.ledger.rows.size(); ++t) {
            worst_spread = std::max(worst_spread, std::abs(res.ledger.rows[t].spread));
        }
    }
    const bool pass = wins >= 40 && worst_spread <= 1e-8;
    std::ostringstream s;
    s << "Sharpe above buy-and-hold on " << wins << "/" << seeds << " seeds (need 40); zero-volatility max |s_t| "
      << fmt("%.3g", worst_spread) << " after " << warmup << " warm-up rows (limit 1e-8, diffuse prior kappa "
      << fmt("%.0e", kDefaultDiffuseScale) << ")";
    return {pass, s.str()};
}

// ---------------------------------------------------------------- 8
Outcome metrics_fixtures() {
    // Five days: spread, position after trading, pnl on the previous position.
    const double spreads[] = {0.5, -1.0, 0.25, 1.0, -0.5};
    const std::int64_t positions[] = {2, 2, -1, 0, 0};
    const double pnls[] = {0.0, 20.0, -10.0, 5.0, 0.0};
    TradeLedger l;
    double cum = 0.0;
    std::int64_t prev = 0;
    for (int i = 0; i < 5; ++i) {
        LedgerRow r;
        r.spread = spreads[i];
        r.position = positions[i];
        r.order = positions[i] - prev;
        prev = positions[i];
        r.pnl = pnls[i];
        cum += pnls[i];
        r.cum_pnl = cum;
        l.rows.push_back(r);
    }
    SummaryOptions opts;
    opts.endowment = 1000.0;
    opts.split = 1;
    const BacktestReport rep = summarize(l, opts);

    // Evaluation days 2..5 in percent of w: 2, -1, 0.5, 0.
    // Held positions entering those days: 2, 2, -1, 0 -> three active days.
    const double mean = 0.375;
    const double sd = std::sqrt((std::pow(2 - mean, 2) + std::pow(-1 - mean, 2) + std::pow(0.5 - mean, 2) +
                                 std::pow(0 - mean, 2)) / 3.0);
    struct Check {
        const char* name;
        double got, want;
    };
    const Check checks[] = {
        {"pct_gain", rep.pct_gain, 1.25},
        {"pct_loss", rep.pct_loss, -1.0},
        {"mdd", rep.mdd, 1.0},
        {"pct_win", rep.pct_win, 200.0 / 3.0},
        {"pct_lose", rep.pct_lose, 100.0 / 3.0},
        {"ann_return", rep.ann_return, mean * 252.0},
        {"ann_vol", rep.ann_vol, sd * std::sqrt(252.0)},
        {"sharpe", rep.sharpe.value_or(NAN), mean * 252.0 / (sd * std::sqrt(252.0))},
        {"mse_in", rep.mse_in, 0.25},
        {"mse_out", rep.mse_out, (1.0 + 0.0625 + 1.0 + 0.25) / 4.0},
    };
    std::string bad;
    for (const auto& c : checks) {
        if (!(std::abs(c.got - c.want) <= 1e-12 * std::max(1.0, std::abs(c.want)))) bad += std::string(" ") + c.name;
    }
    const std::vector<double> curve{0, 10, 5, 12, 3};
    const double mdd = max_drawdown(curve, 100.0);
    const std::vector<double> r123{1, 2, 3};
    const double sh = sharpe(r123);
    const bool pass = bad.empty() && mdd == 9.0 && sh == 2.0;
    return {pass, "report fields " + (bad.empty() ? std::string("all match") : "mismatch:" + bad) +
                      ", max_drawdown(0,10,5,12,3; w=100) = " + fmt("%.17g", mdd) + "%, sharpe(1,2,3) = " +
                      fmt("%.17g", sh)};
}

// ---------------------------------------------------------------- 9
int run_cli(const std::string& args) {
    const std::string cmd = std::string(FLSARB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string bytes_of(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Number of files that differ between two output directories (-1 if the
// file sets differ).
int compare_dirs(const fs::path& a, const fs::path& b, int& files) {
    std::vector<std::string> names_a, names_b;
    for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename().string());
    for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename().string());
    std::sort(names_a.begin(), names_a.end());
    std::sort(names_b.begin(), names_b.end());
    if (names_a != names_b) return -1;
    files = static_cast<int>(names_a.size());
    int diff = 0;
    for (const auto& n : names_a) {
        if (n == "effective_config.txt") continue;  // records its own output_dir
        diff += bytes_of(a / n) != bytes_of(b / n);
    }
    return diff;
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "flsarb_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    {
        std::ofstream cfg(root / "market.cfg");
        cfg << "synthetic = true\nseed = 17\nrows = 400\nstreams = 8\nfeatures = svd:3\nwarmup_rows = 50\n"
               "delta = 0.1,0.5,0.9\n";
    }
    int codes = 0;
    for (const char* run : {"a", "b"}) {
        codes += run_cli("sim-fig2 --seed 17 --delta 0.98 --mode both --out-dir " + (root / "fig2" / run).string());
        codes += run_cli("backtest --config " + (root / "market.cfg").string() + " --out-dir " +
                         (root / "bt" / run).string());
    }
    int fig2_files = 0, bt_files = 0;
    const int fig2_diff = codes == 0 ? compare_dirs(root / "fig2" / "a", root / "fig2" / "b", fig2_files) : -1;
    const int bt_diff = codes == 0 ? compare_dirs(root / "bt" / "a", root / "bt" / "b", bt_files) : -1;
    const bool same_cfg = codes == 0 &&
        bytes_of(root / "fig2" / "a" / "effective_config.txt").size() > 0;
    fs::remove_all(root);
    std::ostringstream s;
    s << "exit codes sum " << codes << "; sim-fig2 " << fig2_files << " files, " << fig2_diff << " differ; backtest "
      << bt_files << " files, " << bt_diff << " differ";
    return {codes == 0 && fig2_diff == 0 && bt_diff == 0 && same_cfg && fig2_files > 0 && bt_files > 0, s.str()};
}

// ---------------------------------------------------------------- 10
double kf_rate(Eigen::Index p, int updates) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(p));
    const Eigen::MatrixXd xs = 0.01 * testing::random_matrix(rng, 64, p);
    const Eigen::VectorXd ys = 0.01 * testing::random_vector(rng, 64);
    KalmanFilter kf = KalmanFilter::fls_equivalent(p, Smoothing::from_delta(0.5));
    for (int i = 0; i < 8; ++i) kf.update(xs.row(i).transpose(), ys(i));  // warm caches
    const auto t0 = Clock::now();
    for (int i = 0; i < updates; ++i) kf.update(xs.row(i % 64).transpose(), ys(i % 64));
    const double secs = seconds_since(t0);
    if (!kf.beta().allFinite()) return 0.0;
    return updates / secs;
}

Outcome performance() {
    const double big = kf_rate(432, 400);
    const double small = kf_rate(3, 500000);
    return {big >= 50.0 && small >= 100000.0, "p=432: " + fmt("%.0f", big) + " updates/s (need 50); p=3: " +
                                                   fmt("%.0f", small) + " updates/s (need 100000)"};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "FLS/KF equivalence", fls_kf_equivalence},
        {2, "batch smoother vs direct minimizer", batch_oracle},
        {3, "OLS limit", ols_limit},
        {4, "simulated coefficient tracking", fig2_replication},
        {5, "eigen-tracking", eigen_tracking},
        {6, "ledger integrity", ledger_integrity},
        {7, "strategy sanity", strategy_sanity},
        {8, "metrics fixtures", metrics_fixtures},
        {9, "determinism", determinism},
        {10, "performance", performance},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: flsarb_acceptance [--criterion N]\n";
            return 2;
        }
    }
    int failed = 0, ran = 0;
    for (const auto& c : criteria()) {
        if (only && c.id != only) continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("criterion %2d %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    if (ran == 0) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    return failed == 0 ? 0 : 1;
}
