#include "flsarb/synth.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "flsarb/error.hpp"

namespace flsarb {
namespace {

// Uniform on the closed interval [-half, half].
std::uniform_real_distribution<double> closed_uniform(double half) {
    return std::uniform_real_distribution<double>(-half, std::nextafter(half, std::numeric_limits<double>::infinity()));
}

}  // namespace

Fig2Data gen_fig2(const Fig2Config& cfg) {
    if (cfg.T < 1) throw InvalidArgument("gen_fig2: T must be positive");
    if (!(cfg.jump_t >= 2 && cfg.jump_t < cfg.sine_from)) {
        throw InvalidArgument("gen_fig2: need 2 <= jump_t < sine_from");
    }
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> walk(0.0, cfg.walk_sd);
    std::normal_distribution<double> flat(0.0, cfg.flat_sd);
    auto sine_noise = closed_uniform(cfg.sine_noise);
    auto obs_noise = closed_uniform(cfg.obs_noise);
    std::normal_distribution<double> z(0.0, cfg.x_noise_sd);

    Fig2Data out;
    out.beta.resize(cfg.T);
    out.x.resize(cfg.T);
    out.y.resize(cfg.T);

    out.beta(0) = cfg.beta1;
    for (int t = 2; t <= cfg.T; ++t) {
        const double prev = out.beta(t - 2);
        double b = 0.0;
        if (t < cfg.jump_t) {
            b = prev + walk(rng);
        } else if (t == cfg.jump_t) {
            b = prev + cfg.jump;
        } else if (t < cfg.sine_from) {
            b = prev + flat(rng);
        } else {
            b = cfg.sine_amp * std::sin(cfg.sine_freq * t) + sine_noise(rng);
        }
        out.beta(t - 1) = b;
    }
    double x_prev = 0.0;
    for (int t = 0; t < cfg.T; ++t) {
        x_prev = cfg.ar * x_prev + z(rng);
        out.x(t) = x_prev;
    }
    for (int t = 0; t < cfg.T; ++t) out.y(t) = out.x(t) * out.beta(t) + obs_noise(rng);
    return out;
}

MarketData gen_market(const MarketConfig& cfg) {
    if (cfg.streams < 1 || cfg.factors < 1) throw InvalidArgument("gen_market: need streams and factors");
    if (cfg.T < 2) throw InvalidArgument("gen_market: need at least two rows");
    if (!(cfg.reversion > 0.0 && cfg.reversion < 1.0)) {
        throw InvalidArgument("gen_market: reversion must lie in (0, 1)");
    }
    if (cfg.factor_sd < 0 || cfg.idio_sd < 0 || cfg.spread_sd < 0 || cfg.loading_sd < 0) {
        throw InvalidArgument("gen_market: scales must be non-negative");
    }
    if (!(cfg.index_start > 0.0 && cfg.stream_start > 0.0)) {
        throw InvalidArgument("gen_market: start prices must be positive");
    }

    const int p = cfg.streams;
    const int nf = cfg.factors;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.0, 2.0 / p);

    MarketData out;
    out.loadings.resize(p, nf);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < nf; ++j) out.loadings(i, j) = 1.0 + cfg.loading_sd * std_normal(rng);
    out.weights.resize(p);
    for (int i = 0; i < p; ++i) out.weights(i) = weight(rng);

    const int R = cfg.T - 1;
    Eigen::MatrixXd r(R, p);
    Eigen::VectorXd a(R);
    out.spread.resize(R);
    Eigen::VectorXd f(nf);
    double z_prev = 0.0;
    for (int t = 0; t < R; ++t) {
        for (int j = 0; j < nf; ++j) f(j) = cfg.factor_sd * std_normal(rng);
        for (int i = 0; i < p; ++i) {
            r(t, i) = cfg.drift + out.loadings.row(i).dot(f) + cfg.idio_sd * std_normal(rng);
        }
        const double z = (1.0 - cfg.reversion) * z_prev + cfg.spread_sd * std_normal(rng);
        out.spread(t) = z;
        a(t) = out.weights.dot(r.row(t)) + (z - z_prev);
        z_prev = z;
    }

    auto& table = out.prices;
    table.labels.push_back("INDEX");
    for (int i = 0; i < p; ++i) {
        char name[16];
        std::snprintf(name, sizeof name, "S%03d", i + 1);
        table.labels.emplace_back(name);
    }
    table.prices.resize(cfg.T, p + 1);
    table.prices(0, 0) = cfg.index_start;
    table.prices.row(0).tail(p).setConstant(cfg.stream_start);
    double log_index = std::log(cfg.index_start);
    Eigen::VectorXd log_streams = Eigen::VectorXd::Constant(p, std::log(cfg.stream_start));
    for (int t = 0; t < R; ++t) {
        log_index += a(t);
        log_streams += r.row(t).transpose();
        table.prices(t + 1, 0) = std::exp(log_index);
        table.prices.row(t + 1).tail(p) = log_streams.array().exp().matrix().transpose();
    }
    table.dates.reserve(static_cast<std::size_t>(cfg.T));
    for (int t = 0; t < cfg.T; ++t) table.dates.push_back(add_business_days(cfg.start_date, t));
    return out;
}

}  // namespace flsarb
