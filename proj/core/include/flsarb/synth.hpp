#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "flsarb/date.hpp"
#include "flsarb/ingest.hpp"

namespace flsarb {

// Single-regressor simulation with a four-regime coefficient path:
//   beta_1 = beta1
//   t = 2..jump_t-1         beta_{t-1} + N(0, walk_sd^2)
//   t = jump_t              beta_{t-1} + jump
//   t = jump_t+1..sine_from-1  beta_{t-1} + N(0, flat_sd^2)
//   t = sine_from..T        sine_amp sin(sine_freq t) + U[-sine_noise, sine_noise]
// x_t = ar x_{t-1} + N(0, x_noise_sd^2) with x_0 = 0, y_t = x_t beta_t + U[-obs_noise, obs_noise].
struct Fig2Config {
    int T = 300;
    double beta1 = 7.0;
    int jump_t = 100;
    double jump = 4.0;
    int sine_from = 201;
    double walk_sd = 0.1;
    double flat_sd = 0.001;
    double sine_amp = 5.0;
    double sine_freq = 0.5;
    double sine_noise = 2.0;
    double obs_noise = 2.0;
    double ar = 0.8;
    double x_noise_sd = 1.0;
    std::uint64_t seed = 1;
};

struct Fig2Data {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd beta;  // ground truth, beta(t-1) is beta_t
};

// Draw order: the whole coefficient path, then the regressor innovations,
// then the observation noise, all from one mt19937_64 stream.
Fig2Data gen_fig2(const Fig2Config& cfg);

// Linear factor market with a mean-reverting mispricing grafted on the target:
//   f_t ~ N(0, factor_sd^2 I_factors),  r_t = drift + L f_t + N(0, idio_sd^2 I_p)
//   z_t = (1 - reversion) z_{t-1} + N(0, spread_sd^2),  z_0 = 0
//   a_t = w' r_t + z_t - z_{t-1}
// so log(target) = w' log(streams) + z up to constants. Loadings L are drawn
// N(1, loading_sd^2), target weights w uniform on [0, 2/p].
struct MarketConfig {
    int streams = 10;
    int factors = 2;
    int T = 1000;  // price rows; returns have T - 1 rows
    double factor_sd = 0.01;
    double loading_sd = 0.5;
    double idio_sd = 0.005;
    double drift = 0.0;
    double reversion = 0.5;
    double spread_sd = 0.005;
    double index_start = 1400.0;
    double stream_start = 100.0;
    Date start_date = Date{std::chrono::year{2000}, std::chrono::month{1}, std::chrono::day{3}};
    std::uint64_t seed = 1;
};

struct MarketData {
    PriceTable prices;          // column 0 "INDEX", then "S001"...
    Eigen::VectorXd spread;     // z_t for t = 1..T-1 (aligned with returns)
    Eigen::VectorXd weights;    // w
    Eigen::MatrixXd loadings;   // L
};

MarketData gen_market(const MarketConfig& cfg);

}  // namespace flsarb
