#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flsarb/backtest.hpp"

namespace flsarb {

// Mean over sample standard deviation (n - 1 denominator), not annualized.
// Throws InvalidArgument for fewer than two values and DataError
// ("degenerate return series") for zero dispersion.
double sharpe(std::span<const double> returns);

// Largest peak-to-trough fall of a cumulative series, as a percentage of
// `base`. The running peak starts at the first element.
double max_drawdown(std::span<const double> cumulative, double base);

// Mean squared value of residuals[0, split) and residuals[split, n).
// Throws InvalidArgument if either side is empty.
std::pair<double, double> mse_split(std::span<const double> residuals, std::size_t split);

struct SummaryOptions {
    double endowment = 1e8;
    double trading_days_per_year = 252.0;
    // First ledger row of the evaluation period. Financial figures use rows
    // [split, n); MSEs compare spreads before and after it.
    std::size_t split = 0;
};

// Daily figures are percentages of the endowment. pct_loss is the mean of
// the negative days and therefore negative. Win/lose percentages count days
// held with a non-zero position; days with zero pnl fall in neither.
// sharpe = ann_return / ann_vol; absent when the evaluation pnl has zero
// dispersion. mse_in is NaN when split == 0.
struct BacktestReport {
    double pct_gain = 0.0;
    double pct_loss = 0.0;
    double mdd = 0.0;
    double pct_win = 0.0;
    double pct_lose = 0.0;
    double ann_return = 0.0;
    double ann_vol = 0.0;
    std::optional<double> sharpe;
    double mse_in = 0.0;
    double mse_out = 0.0;
};

BacktestReport summarize(const TradeLedger& ledger, const SummaryOptions& opts);

// Column order follows the published results table:
// delta, % gain, % loss, MDD, % WT, % LT, Ann.R., Ann.V., Sharpe, in-MSE, out-MSE.
struct ReportRow {
    std::string label;  // usually the delta value
    BacktestReport report;
};
void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows);
std::string format_report_table(const std::vector<ReportRow>& rows);

}  // namespace flsarb
