#include "flsarb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "flsarb/csv_out.hpp"
#include "flsarb/error.hpp"

namespace flsarb {
namespace {

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stdev(std::span<const double> v, double m) {
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_square(std::span<const double> v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return ss / static_cast<double>(v.size());
}

}  // namespace

double sharpe(std::span<const double> returns) {
    if (returns.size() < 2) throw InvalidArgument("sharpe: need at least two returns");
    const double m = mean(returns);
    const double sd = sample_stdev(returns, m);
    if (!(sd > 0.0)) throw DataError("degenerate return series");
    return m / sd;
}

double max_drawdown(std::span<const double> cumulative, double base) {
    if (cumulative.empty()) throw InvalidArgument("max_drawdown: empty series");
    if (!(base > 0.0)) throw InvalidArgument("max_drawdown: base must be positive");
    double peak = cumulative.front();
    double worst = 0.0;
    for (double c : cumulative) {
        peak = std::max(peak, c);
        worst = std::max(worst, peak - c);
    }
    return 100.0 * worst / base;
}

std::pair<double, double> mse_split(std::span<const double> residuals, std::size_t split) {
    if (split == 0) throw InvalidArgument("mse_split: empty in-sample");
    if (split >= residuals.size()) throw InvalidArgument("mse_split: empty out-sample");
    return {mean_square(residuals.first(split)), mean_square(residuals.subspan(split))};
}

BacktestReport summarize(const TradeLedger& ledger, const SummaryOptions& opts) {
    if (!(opts.endowment > 0.0)) throw InvalidArgument("summarize: endowment must be positive");
    if (!(opts.trading_days_per_year > 0.0)) throw InvalidArgument("summarize: days per year must be positive");
    const std::size_t n = ledger.rows.size();
    if (opts.split >= n) throw InvalidArgument("summarize: evaluation period is empty");

    std::vector<double> daily;  // % of endowment
    std::vector<double> cum{0.0};
    std::size_t held_days = 0, wins = 0, losses = 0;
    double gain_sum = 0.0, loss_sum = 0.0;
    std::size_t gain_n = 0, loss_n = 0;
    for (std::size_t i = opts.split; i < n; ++i) {
        const double f = ledger.rows[i].pnl;
        const double pct = 100.0 * f / opts.endowment;
        daily.push_back(pct);
        cum.push_back(cum.back() + f);
        if (f > 0.0) {
            gain_sum += pct;
            ++gain_n;
        } else if (f < 0.0) {
            loss_sum += pct;
            ++loss_n;
        }
        const std::int64_t prev_pos = i == 0 ? 0 : ledger.rows[i - 1].position;
        if (prev_pos != 0) {
            ++held_days;
            if (f > 0.0) ++wins;
            if (f < 0.0) ++losses;
        }
    }

    BacktestReport rep;
    rep.pct_gain = gain_n ? gain_sum / static_cast<double>(gain_n) : 0.0;
    rep.pct_loss = loss_n ? loss_sum / static_cast<double>(loss_n) : 0.0;
    rep.mdd = max_drawdown(cum, opts.endowment);
    if (held_days) {
        rep.pct_win = 100.0 * static_cast<double>(wins) / static_cast<double>(held_days);
        rep.pct_lose = 100.0 * static_cast<double>(losses) / static_cast<double>(held_days);
    }
    const double m = mean(daily);
    rep.ann_return = m * opts.trading_days_per_year;
    if (daily.size() >= 2) {
        const double sd = sample_stdev(daily, m);
        rep.ann_vol = sd * std::sqrt(opts.trading_days_per_year);
        if (sd > 0.0) rep.sharpe = rep.ann_return / rep.ann_vol;
    }

    const Eigen::VectorXd s = ledger.spreads();
    const std::span<const double> spreads(s.data(), static_cast<std::size_t>(s.size()));
    if (opts.split == 0) {
        rep.mse_in = std::numeric_limits<double>::quiet_NaN();
        rep.mse_out = mean_square(spreads);
    } else {
        std::tie(rep.mse_in, rep.mse_out) = mse_split(spreads, opts.split);
    }
    return rep;
}

void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
    auto out = open_output(path);
    out << "delta,pct_gain,pct_loss,mdd,pct_win,pct_lose,ann_return,ann_vol,sharpe,mse_in,mse_out\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << row.label << ',' << format_double(r.pct_gain) << ',' << format_double(r.pct_loss) << ','
            << format_double(r.mdd) << ',' << format_double(r.pct_win) << ',' << format_double(r.pct_lose)
            << ',' << format_double(r.ann_return) << ',' << format_double(r.ann_vol) << ','
            << (r.sharpe ? format_double(*r.sharpe) : std::string()) << ',' << format_double(r.mse_in) << ','
            << format_double(r.mse_out) << '\n';
    }
}

std::string format_report_table(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    char buf[512];
    int width = 8;
    for (const auto& row : rows) width = std::max(width, static_cast<int>(row.label.size()));
    std::snprintf(buf, sizeof buf, "%-*s %8s %8s %8s %8s %8s %9s %8s %8s %10s %10s\n", width, "delta", "%gain", "%loss",
                  "MDD", "%WT", "%LT", "Ann.R.", "Ann.V.", "Sharpe", "in-MSE", "out-MSE");
    os << buf;
    for (const auto& row : rows) {
        const auto& r = row.report;
        char sh[32];
        if (r.sharpe) {
            std::snprintf(sh, sizeof sh, "%8.3f", *r.sharpe);
        } else {
            std::snprintf(sh, sizeof sh, "%8s", "-");
        }
        std::snprintf(buf, sizeof buf, "%-*s %8.3f %8.3f %8.3f %8.3f %8.3f %9.3f %8.3f %s %10.3e %10.3e\n",
                      width, row.label.substr(0, 200).c_str(), r.pct_gain, r.pct_loss, r.mdd, r.pct_win, r.pct_lose, r.ann_return,
                      r.ann_vol, sh, r.mse_in, r.mse_out);
        os << buf;
    }
    return os.str();
}

}  // namespace flsarb
