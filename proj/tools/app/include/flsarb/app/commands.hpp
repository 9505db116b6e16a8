#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flsarb/app/config.hpp"
#include "flsarb/backtest.hpp"
#include "flsarb/ingest.hpp"
#include "flsarb/metrics.hpp"
#include "flsarb/synth.hpp"

namespace flsarb::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

// Runs `body` and maps exceptions to exit codes: configuration and argument
// problems give 2, data and numerical failures give 3. The message goes to err.
int guarded(const std::function<void()>& body, std::ostream& err);

struct MarketInput {
    PriceTable prices;  // cleaned: no holes, target first
    ReturnMatrix returns;
    std::vector<std::string> dropped;
};

// Reads (or generates) the price panel and turns it into returns.
MarketInput load_market(const RunConfig& cfg);

// Number of leading return rows used only for warm-up.
long resolve_warmup_rows(const RunConfig& cfg, const ReturnMatrix& returns);

struct DeltaRun {
    double delta = 0.0;
    BacktestResult result;
    BacktestReport report;
};

struct GridOutcome {
    MarketInput input;
    long warmup_rows = 0;
    std::vector<DeltaRun> runs;  // same order as cfg.deltas
    std::optional<DeltaRun> buy_and_hold;
};

// One backtest per delta, spread over cfg.threads workers. Results do not
// depend on the thread count.
GridOutcome run_grid(const RunConfig& cfg, bool with_baseline);

// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
// The first exception in index order is rethrown after all workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

void cmd_backtest(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_sweep_sharpe(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct RegimeError {
    std::string regime;
    int first_t = 0;  // 1-based, inclusive
    int last_t = 0;
    double mse = 0.0;
};

struct Fig2Fit {
    Fig2Data data;
    std::optional<Eigen::VectorXd> online;
    std::optional<Eigen::VectorXd> offline;
};

Fig2Fit fit_fig2(const Fig2RunConfig& cfg);

// Random walk up to the jump, flat segment from the jump, then the sinusoid.
std::vector<RegimeError> regime_errors(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate,
                                       const Fig2Config& sim);

// Steps after the jump until the estimate is within `tol` of the truth;
// nullopt if it never gets there before the sinusoid starts.
std::optional<int> jump_recovery_steps(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate,
                                       const Fig2Config& sim, double tol = 1.0);

void cmd_sim_fig2(const Fig2RunConfig& cfg, std::ostream& out, std::ostream& err);

// Writes a synthetic market to an ingest-format CSV.
void cmd_gen_market(const MarketConfig& cfg, const std::filesystem::path& path, std::ostream& out);

}  // namespace flsarb::app
