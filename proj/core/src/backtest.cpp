#include "flsarb/backtest.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "flsarb/csv_out.hpp"
#include "flsarb/error.hpp"
#include "flsarb/kalman.hpp"

namespace flsarb {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

FeatureConfig FeatureConfig::parse(std::string_view text) {
    FeatureConfig cfg;
    if (text == "raw") {
        cfg.kind = FeatureKind::kRaw;
        return cfg;
    }
    if (text.substr(0, 4) == "svd:") {
        const auto digits = text.substr(4);
        long k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 1) {
            cfg.kind = FeatureKind::kEigen;
            cfg.components = k;
            return cfg;
        }
    }
    throw InvalidArgument("feature mode must be 'raw' or 'svd:<k>' with k >= 1, got '" + std::string(text) + "'");
}

std::string FeatureConfig::to_string() const {
    return kind == FeatureKind::kRaw ? std::string("raw") : "svd:" + std::to_string(components);
}

Eigen::VectorXd TradeLedger::pnl() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = rows[i].pnl;
    return out;
}

Eigen::VectorXd TradeLedger::spreads() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = rows[i].spread;
    return out;
}

BacktestResult run_backtest(const ReturnMatrix& returns, const Eigen::VectorXd& index_prices,
                            const BacktestConfig& cfg) {
    const Eigen::Index T = returns.rows();
    const Eigen::Index p = returns.streams_count();
    if (returns.streams.rows() != T || static_cast<Eigen::Index>(returns.dates.size()) != T) {
        throw DataError("backtest: return matrix components have different lengths");
    }
    if (index_prices.size() != T + 1) {
        throw DataError("backtest: expected " + std::to_string(T + 1) + " index prices, got " +
                        std::to_string(index_prices.size()));
    }
    if (p < 1) throw DataError("backtest: no explanatory streams");
    if (cfg.warmup_rows < 0) throw InvalidArgument("backtest: warmup_rows must be non-negative");
    cfg.sizing.validate();

    const bool eigen = cfg.features.kind == FeatureKind::kEigen;
    const Eigen::Index k = eigen ? cfg.features.components : p;
    if (eigen && k > p) {
        throw InvalidArgument("backtest: svd:" + std::to_string(k) + " exceeds the " + std::to_string(p) +
                              " explanatory streams");
    }

    std::optional<EigenTracker> tracker;
    if (eigen) tracker.emplace(p, k, cfg.features.tracker);
    KalmanFilter kf = KalmanFilter::fls_equivalent(k, cfg.smoothing, cfg.kappa);

    BacktestResult res;
    res.ledger.rows.reserve(static_cast<std::size_t>(T));
    res.coefficients = Eigen::MatrixXd::Constant(T, k, kNaN);
    res.innovations = Eigen::VectorXd::Constant(T, kNaN);
    res.forecast_var = Eigen::VectorXd::Constant(T, kNaN);
    if (eigen) {
        res.eigenvalues = Eigen::MatrixXd::Constant(T, k, kNaN);
        if (cfg.record_eigenvectors) {
            res.eigenvectors.assign(static_cast<std::size_t>(k), Eigen::MatrixXd::Constant(T, p, kNaN));
        }
    }

    std::int64_t held = 0;
    double cum = 0.0;
    Eigen::VectorXd x(k);
    for (Eigen::Index t = 0; t < T; ++t) {
        const double a = returns.target(t);
        const double p_now = index_prices(t + 1);
        const double p_prev = index_prices(t);

        bool have_features = true;
        if (eigen) {
            if (cfg.features.freeze_after_warmup && t == cfg.warmup_rows) tracker->freeze(true);
            tracker->update(returns.streams.row(t).transpose());
            const Eigen::VectorXd lam = tracker->eigenvalues();
            res.eigenvalues.row(t).head(lam.size()) = lam.transpose();
            if (cfg.record_eigenvectors) {
                const Eigen::MatrixXd basis = tracker->basis();
                for (Eigen::Index j = 0; j < basis.cols(); ++j) {
                    res.eigenvectors[static_cast<std::size_t>(j)].row(t) = basis.col(j).transpose();
                }
            }
            have_features = tracker->ready();
            if (have_features) x = tracker->project(returns.streams.row(t).transpose());
        } else {
            x = returns.streams.row(t).transpose();
        }

        LedgerRow row;
        row.date = returns.dates[static_cast<std::size_t>(t)];
        row.index_price = p_now;
        row.estimated = have_features;
        if (have_features) {
            const KfDiagnostics diag = kf.update(x, a);
            res.coefficients.row(t) = kf.beta().transpose();
            res.innovations(t) = diag.e;
            res.forecast_var(t) = diag.Q;
            row.spread = spread(a, x, kf.beta());
        } else {
            row.spread = a;
        }

        row.pnl = daily_pnl(p_now, p_prev, static_cast<double>(held), cfg.sizing);

        const bool tradable = have_features && t >= cfg.warmup_rows;
        if (tradable) {
            row.signal = cfg.rule == TradingRule::kBuyAndHold ? 1 : signal(row.spread);
        }
        row.units = contracts_per_unit(p_now, cfg.sizing);
        row.target = position(row.signal, p_now, cfg.sizing);
        row.order = order_size(row.target, static_cast<double>(held));
        held += row.order;
        row.position = held;
        row.pnl -= cfg.sizing.cost_per_contract * std::abs(static_cast<double>(row.order));
        cum += row.pnl;
        row.cum_pnl = cum;
        res.ledger.rows.push_back(row);
    }
    return res;
}

void write_ledger_csv(const std::filesystem::path& path, const TradeLedger& ledger) {
    auto out = open_output(path);
    out << "date,spread,signal,position,order,pnl,cum_pnl,index_price\n";
    for (const auto& r : ledger.rows) {
        out << format_date(r.date) << ',' << format_double(r.spread) << ',' << r.signal << ',' << r.position
            << ',' << r.order << ',' << format_double(r.pnl) << ',' << format_double(r.cum_pnl) << ','
            << format_double(r.index_price) << '\n';
    }
}

void write_eigenvalue_csv(const std::filesystem::path& path, const Eigen::MatrixXd& eigenvalues) {
    auto out = open_output(path);
    out << 't';
    for (Eigen::Index j = 0; j < eigenvalues.cols(); ++j) out << ",lambda_" << (j + 1);
    out << '\n';
    for (Eigen::Index t = 0; t < eigenvalues.rows(); ++t) {
        out << (t + 1);
        for (Eigen::Index j = 0; j < eigenvalues.cols(); ++j) out << ',' << format_double(eigenvalues(t, j));
        out << '\n';
    }
}

void write_eigenvector_csv(const std::filesystem::path& path, const Eigen::MatrixXd& vectors,
                           const std::vector<std::string>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != vectors.cols()) {
        throw InvalidArgument("write_eigenvector_csv: label count mismatch");
    }
    auto out = open_output(path);
    out << 't';
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (Eigen::Index t = 0; t < vectors.rows(); ++t) {
        out << (t + 1);
        for (Eigen::Index j = 0; j < vectors.cols(); ++j) out << ',' << format_double(vectors(t, j));
        out << '\n';
    }
}

}  // namespace flsarb
