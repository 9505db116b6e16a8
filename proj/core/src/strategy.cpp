#include "flsarb/strategy.hpp"

#include <cmath>

#include "flsarb/error.hpp"

namespace flsarb {

void SizingConfig::validate() const {
    if (!(multiplier > 0.0) || !std::isfinite(multiplier)) throw InvalidArgument("multiplier must be positive");
    if (!(endowment > 0.0) || !std::isfinite(endowment)) throw InvalidArgument("endowment must be positive");
    if (!(cost_per_contract >= 0.0) || !std::isfinite(cost_per_contract)) {
        throw InvalidArgument("cost_per_contract must be non-negative");
    }
}

double spread(double target_return, const Eigen::Ref<const Eigen::VectorXd>& features,
              const Eigen::Ref<const Eigen::VectorXd>& beta) {
    if (features.size() != beta.size()) throw InvalidArgument("spread: feature/coefficient size mismatch");
    return target_return - features.dot(beta);
}

int signal(double s) {
    if (!std::isfinite(s)) throw InvalidArgument("signal: non-finite spread");
    return (s < 0.0) - (s > 0.0);
}

double contracts_per_unit(double index_price, const SizingConfig& cfg) {
    if (!(index_price > 0.0) || !std::isfinite(index_price)) {
        throw InvalidArgument("index price must be positive");
    }
    return cfg.endowment / (cfg.multiplier * index_price);
}

double position(int sig, double index_price, const SizingConfig& cfg) {
    return static_cast<double>(sig) * contracts_per_unit(index_price, cfg);
}

std::int64_t order_size(double current, double previous) {
    return static_cast<std::int64_t>(std::llround(current - previous));
}

double daily_pnl(double p_now, double p_prev, double held, const SizingConfig& cfg) {
    return cfg.multiplier * (p_now - p_prev) * held;
}

}  // namespace flsarb
