#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "flsarb/date.hpp"
#include "flsarb/eigentrack.hpp"
#include "flsarb/fls.hpp"
#include "flsarb/ingest.hpp"
#include "flsarb/smoothing.hpp"
#include "flsarb/strategy.hpp"

namespace flsarb {

enum class FeatureKind { kRaw, kEigen };

// Regressors fed to the estimator: the raw explanatory returns, or their
// projection on k incrementally tracked eigenvectors.
struct FeatureConfig {
    FeatureKind kind = FeatureKind::kRaw;
    Eigen::Index components = 3;
    EigenTrackerOptions tracker;
    // Stop updating the tracker once the warm-up rows have been consumed.
    bool freeze_after_warmup = false;

    // "raw" or "svd:<k>"; throws InvalidArgument otherwise.
    static FeatureConfig parse(std::string_view text);
    std::string to_string() const;
};

enum class TradingRule {
    kMeanReversion,  // -sign(spread)
    kBuyAndHold,     // always +1
};

struct BacktestConfig {
    Smoothing smoothing = Smoothing::from_delta(0.2);
    double kappa = kDefaultDiffuseScale;
    FeatureConfig features;
    SizingConfig sizing;
    // Rows before this index update the models but never trade.
    Eigen::Index warmup_rows = 0;
    TradingRule rule = TradingRule::kMeanReversion;
    bool record_eigenvectors = false;
};

struct LedgerRow {
    Date date;
    double index_price = 0.0;
    double spread = 0.0;
    int signal = 0;
    double units = 0.0;        // pi_t = w / (multiplier p_t)
    double target = 0.0;       // signal * units
    std::int64_t order = 0;    // round(target - previous position)
    std::int64_t position = 0; // contracts held after today's order
    double pnl = 0.0;          // earned today on yesterday's position
    double cum_pnl = 0.0;
    bool estimated = false;    // false while the feature tracker warms up
};

struct TradeLedger {
    std::vector<LedgerRow> rows;

    std::size_t size() const noexcept { return rows.size(); }
    Eigen::VectorXd pnl() const;
    Eigen::VectorXd spreads() const;
};

struct BacktestResult {
    TradeLedger ledger;
    Eigen::MatrixXd coefficients;  // rows x features, NaN where not estimated
    Eigen::VectorXd innovations;   // NaN where not estimated
    Eigen::VectorXd forecast_var;
    Eigen::MatrixXd eigenvalues;   // rows x k (eigen features only)
    std::vector<Eigen::MatrixXd> eigenvectors;  // k matrices rows x p, if recorded
};

// Sequential backtest over aligned returns. index_prices holds the target's
// price level for every PriceTable row, i.e. returns.rows() + 1 values.
//
// Per row t: update features, update the Kalman estimator with (x_t, a_t),
// s_t = a_t - x_t' beta_t, book pnl_t on the position held since t-1, then
// rebalance to signal(s_t) * pi_t contracts at today's close.
BacktestResult run_backtest(const ReturnMatrix& returns, const Eigen::VectorXd& index_prices,
                            const BacktestConfig& cfg);

// `date,spread,signal,position,order,pnl,cum_pnl,index_price`.
void write_ledger_csv(const std::filesystem::path& path, const TradeLedger& ledger);

// `t,lambda_1,...,lambda_k`.
void write_eigenvalue_csv(const std::filesystem::path& path, const Eigen::MatrixXd& eigenvalues);
// `t,<label_1>,...,<label_p>` for one tracked component.
void write_eigenvector_csv(const std::filesystem::path& path, const Eigen::MatrixXd& vectors,
                           const std::vector<std::string>& labels);

}  // namespace flsarb
