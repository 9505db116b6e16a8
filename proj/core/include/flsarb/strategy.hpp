#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace flsarb {

struct SizingConfig {
    double multiplier = 250.0;  // currency per index point; contract value C_t = multiplier * p_t
    double endowment = 1e8;     // w, held constant for the whole backtest
    double cost_per_contract = 0.0;

    // Throws InvalidArgument unless multiplier and endowment are positive and
    // the cost is non-negative.
    void validate() const;
};

// Mispricing s = a - r' beta.
double spread(double target_return, const Eigen::Ref<const Eigen::VectorXd>& features,
              const Eigen::Ref<const Eigen::VectorXd>& beta);

// Plus-minus-one rule: -sign(s), with a zero spread giving a flat signal.
int signal(double s);

// Contracts pi_t = w / (multiplier * p) scaled by the signal.
double contracts_per_unit(double index_price, const SizingConfig& cfg);
double position(int sig, double index_price, const SizingConfig& cfg);

// round(current - previous), halves away from zero.
std::int64_t order_size(double current, double previous);

// multiplier * (p_now - p_prev) * held.
double daily_pnl(double p_now, double p_prev, double held, const SizingConfig& cfg);

}  // namespace flsarb
