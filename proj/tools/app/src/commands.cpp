#include "flsarb/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "flsarb/csv_out.hpp"
#include "flsarb/kalman.hpp"
#include "flsarb/smoother.hpp"

namespace flsarb::app {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string delta_tag(double delta) { return "delta_" + shortest(delta); }

BacktestConfig backtest_config(const RunConfig& cfg, double delta, long warmup_rows) {
    BacktestConfig bt;
    bt.smoothing = Smoothing::from_delta(delta);
    bt.kappa = cfg.kappa;
    bt.features = cfg.features;
    bt.sizing = cfg.sizing;
    bt.warmup_rows = warmup_rows;
    return bt;
}

SummaryOptions summary_options(const RunConfig& cfg, long warmup_rows) {
    SummaryOptions opts;
    opts.endowment = cfg.sizing.endowment;
    opts.trading_days_per_year = cfg.trading_days_per_year;
    opts.split = static_cast<std::size_t>(warmup_rows);
    return opts;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

}  // namespace

int guarded(const std::function<void()>& body, std::ostream& err) {
    try {
        body();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Underdetermined& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

MarketInput load_market(const RunConfig& cfg) {
    MarketInput in;
    PriceTable raw;
    if (cfg.synthetic) {
        raw = gen_market(cfg.market).prices;
    } else {
        if (!std::filesystem::is_regular_file(*cfg.input)) {
            throw DataError("input file " + cfg.input->string() + " does not exist");
        }
        raw = load_csv(*cfg.input, CsvSchema{cfg.target});
        if (cfg.split_factors) raw = apply_split_factors(raw, load_split_factors(*cfg.split_factors));
    }
    in.prices = forward_fill(drop_sparse_streams(raw, cfg.max_missing, &in.dropped));
    if (in.prices.rows() < 2) throw DataError("need at least two price rows");
    in.returns = to_log_returns(in.prices);
    return in;
}

long resolve_warmup_rows(const RunConfig& cfg, const ReturnMatrix& returns) {
    long rows = cfg.warmup_rows;
    if (cfg.warmup_end) {
        const auto& dates = returns.dates;
        rows = static_cast<long>(std::lower_bound(dates.begin(), dates.end(), *cfg.warmup_end) - dates.begin());
    }
    if (rows >= static_cast<long>(returns.rows())) {
        throw DataError("warm-up covers all " + std::to_string(returns.rows()) +
                        " return rows; nothing left to evaluate");
    }
    return rows;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

GridOutcome run_grid(const RunConfig& cfg, bool with_baseline) {
    GridOutcome g;
    g.input = load_market(cfg);
    g.warmup_rows = resolve_warmup_rows(cfg, g.input.returns);
    const Eigen::VectorXd index = g.input.prices.target();
    const SummaryOptions opts = summary_options(cfg, g.warmup_rows);

    const std::size_t n = cfg.deltas.size();
    const std::size_t jobs = n + (with_baseline ? 1 : 0);
    g.runs.resize(n);
    if (with_baseline) g.buy_and_hold.emplace();
    parallel_for(jobs, cfg.threads, [&](std::size_t i) {
        const bool baseline = i == n;
        DeltaRun& run = baseline ? *g.buy_and_hold : g.runs[i];
        run.delta = baseline ? cfg.deltas.front() : cfg.deltas[i];
        BacktestConfig bt = backtest_config(cfg, run.delta, g.warmup_rows);
        if (baseline) bt.rule = TradingRule::kBuyAndHold;
        bt.record_eigenvectors = i == 0;
        run.result = run_backtest(g.input.returns, index, bt);
        run.report = summarize(run.result.ledger, opts);
    });
    return g;
}

void cmd_backtest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    print_warnings(cfg.warnings, err);
    const GridOutcome g = run_grid(cfg, true);
    for (const auto& d : g.input.dropped) err << "warning: dropped sparse stream " << d << '\n';

    // Everything is computed before the first file is written.
    const auto& dir = cfg.output_dir;
    std::filesystem::create_directories(dir);
    write_text(dir / "effective_config.txt", effective_config(cfg));
    if (cfg.synthetic) write_price_csv(dir / "prices.csv", g.input.prices);

    std::vector<ReportRow> rows;
    for (const auto& run : g.runs) {
        const std::string tag = delta_tag(run.delta);
        write_ledger_csv(dir / ("ledger_" + tag + ".csv"), run.result.ledger);
        write_coefficient_csv(dir / ("coefficients_" + tag + ".csv"), run.result.coefficients,
                              run.result.innovations, run.result.forecast_var);
        rows.push_back({shortest(run.delta), run.report});
    }
    write_report_csv(dir / "report.csv", rows);

    const std::vector<ReportRow> baseline{{"buy_and_hold", g.buy_and_hold->report}};
    write_ledger_csv(dir / "ledger_buy_and_hold.csv", g.buy_and_hold->result.ledger);
    write_report_csv(dir / "baseline_report.csv", baseline);

    if (cfg.features.kind == FeatureKind::kEigen) {
        const auto& first = g.runs.front().result;
        write_eigenvalue_csv(dir / "eigenvalues.csv", first.eigenvalues);
        const std::vector<std::string> labels(g.input.returns.labels.begin() + 1, g.input.returns.labels.end());
        for (std::size_t j = 0; j < first.eigenvectors.size(); ++j) {
            write_eigenvector_csv(dir / ("eigenvector_" + std::to_string(j + 1) + ".csv"), first.eigenvectors[j],
                                  labels);
        }
    }

    out << "rows " << g.input.returns.rows() << ", streams " << g.input.returns.streams_count() << ", warm-up "
        << g.warmup_rows << ", features " << cfg.features.to_string() << '\n';
    std::vector<ReportRow> table = rows;
    table.insert(table.end(), baseline.begin(), baseline.end());
    out << format_report_table(table);
    out << "wrote " << dir.string() << '\n';
}

void cmd_sweep_sharpe(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    print_warnings(cfg.warnings, err);
    const GridOutcome g = run_grid(cfg, false);
    for (const auto& d : g.input.dropped) err << "warning: dropped sparse stream " << d << '\n';

    std::filesystem::create_directories(cfg.output_dir);
    write_text(cfg.output_dir / "effective_config.txt", effective_config(cfg));
    auto csv = open_output(cfg.output_dir / "sharpe.csv");
    csv << "delta,sharpe\n";
    out << std::setw(8) << "delta" << std::setw(12) << "sharpe" << '\n';
    for (const auto& run : g.runs) {
        const auto& s = run.report.sharpe;
        csv << shortest(run.delta) << ',' << (s ? format_double(*s) : std::string()) << '\n';
        out << std::setw(8) << shortest(run.delta) << std::setw(12) << std::fixed << std::setprecision(4)
            << (s ? *s : std::nan("")) << '\n';
    }
    out.unsetf(std::ios::floatfield);
    if (!csv) throw std::runtime_error("failed writing sharpe.csv");
}

Fig2Fit fit_fig2(const Fig2RunConfig& cfg) {
    Fig2Fit fit;
    fit.data = gen_fig2(cfg.sim);
    const auto smoothing = Smoothing::from_delta(cfg.delta);
    const FlsPrior prior = FlsPrior::diffuse(1, cfg.kappa);
    const Eigen::Index T = fit.data.x.size();
    if (cfg.mode != Fig2Mode::kOffline) {
        KalmanFilter kf = KalmanFilter::matched_to(prior, smoothing);
        Eigen::VectorXd est(T);
        Eigen::VectorXd x(1);
        for (Eigen::Index t = 0; t < T; ++t) {
            x(0) = fit.data.x(t);
            kf.update(x, fit.data.y(t));
            est(t) = kf.beta()(0);
        }
        fit.online = std::move(est);
    }
    if (cfg.mode != Fig2Mode::kOnline) {
        const SmoothedPath path = fls_smooth_batch(fit.data.x, fit.data.y, smoothing, prior);
        fit.offline = path.beta.col(0);
    }
    return fit;
}

std::vector<RegimeError> regime_errors(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate,
                                       const Fig2Config& sim) {
    const int T = static_cast<int>(truth.size());
    const struct {
        const char* name;
        int first, last;
    } spans[] = {{"random_walk", 1, sim.jump_t - 1},
                 {"flat", sim.jump_t, sim.sine_from - 1},
                 {"sine", sim.sine_from, T},
                 {"all", 1, T}};
    std::vector<RegimeError> out;
    for (const auto& s : spans) {
        const int first = std::max(1, s.first), last = std::min(T, s.last);
        if (last < first) continue;
        const auto seg = (estimate - truth).segment(first - 1, last - first + 1);
        out.push_back({s.name, first, last, seg.squaredNorm() / static_cast<double>(seg.size())});
    }
    return out;
}

std::optional<int> jump_recovery_steps(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate,
                                       const Fig2Config& sim, double tol) {
    const int last = std::min<int>(static_cast<int>(truth.size()), sim.sine_from - 1);
    for (int t = sim.jump_t; t <= last; ++t) {
        if (std::abs(estimate(t - 1) - truth(t - 1)) <= tol) return t - sim.jump_t;
    }
    return std::nullopt;
}

void cmd_sim_fig2(const Fig2RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Fig2Fit fit = fit_fig2(cfg);
    const auto& d = fit.data;
    const double mu = Smoothing::from_delta(cfg.delta).mu();

    struct Named {
        std::string mode;
        const Eigen::VectorXd* path;
    };
    std::vector<Named> paths;
    if (fit.online) paths.push_back({"online", &*fit.online});
    if (fit.offline) paths.push_back({"offline", &*fit.offline});

    std::filesystem::create_directories(cfg.output_dir);
    write_text(cfg.output_dir / "effective_config.txt", effective_config(cfg));

    auto csv = open_output(cfg.output_dir / "fig2_paths.csv");
    csv << "t,x,y,beta_true";
    for (const auto& p : paths) csv << ",beta_" << p.mode;
    csv << '\n';
    for (Eigen::Index t = 0; t < d.x.size(); ++t) {
        csv << (t + 1) << ',' << format_double(d.x(t)) << ',' << format_double(d.y(t)) << ','
            << format_double(d.beta(t));
        for (const auto& p : paths) csv << ',' << format_double((*p.path)(t));
        csv << '\n';
    }
    if (!csv) throw std::runtime_error("failed writing fig2_paths.csv");

    auto summary = open_output(cfg.output_dir / "fig2_summary.csv");
    auto costs = open_output(cfg.output_dir / "fig2_costs.csv");
    summary << "mode,regime,first_t,last_t,mse,rmse\n";
    costs << "mode,roughness,incompatibility,jump_recovery_steps\n";
    out << "delta " << shortest(cfg.delta) << ", seed " << cfg.sim.seed << '\n';
    for (const auto& p : paths) {
        for (const auto& r : regime_errors(d.beta, *p.path, cfg.sim)) {
            summary << p.mode << ',' << r.regime << ',' << r.first_t << ',' << r.last_t << ','
                    << format_double(r.mse) << ',' << format_double(std::sqrt(r.mse)) << '\n';
            out << std::left << std::setw(8) << p.mode << std::setw(12) << r.regime << std::right
                << " rmse " << std::fixed << std::setprecision(4) << std::sqrt(r.mse) << '\n';
            out.unsetf(std::ios::floatfield);
        }
        const Eigen::Map<const Eigen::MatrixXd> as_matrix(p.path->data(), p.path->size(), 1);
        const Eigen::Map<const Eigen::MatrixXd> xs(d.x.data(), d.x.size(), 1);
        const auto steps = jump_recovery_steps(d.beta, *p.path, cfg.sim);
        costs << p.mode << ',' << format_double(path_roughness(as_matrix)) << ','
              << format_double(incompatibility_cost(xs, d.y, as_matrix, mu)) << ','
              << (steps ? std::to_string(*steps) : std::string()) << '\n';
    }
    if (!summary || !costs) throw std::runtime_error("failed writing fig2 summaries");
    out << "wrote " << cfg.output_dir.string() << '\n';
}

void cmd_gen_market(const MarketConfig& cfg, const std::filesystem::path& path, std::ostream& out) {
    const MarketData m = gen_market(cfg);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_price_csv(path, m.prices);
    out << "wrote " << m.prices.rows() << " rows x " << m.prices.prices.cols() << " columns to " << path.string()
        << '\n';
}

}  // namespace flsarb::app
