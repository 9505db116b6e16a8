#pragma once

namespace flsarb {

// Smoothing strength of the flexible least squares cost.
//
// delta lives in the open unit interval; mu = (1 - delta) / delta weighs the
// squared coefficient increments against the squared residuals. delta -> 0
// is the constant-coefficient (OLS) limit, delta -> 1 lets the coefficients
// move freely.
class Smoothing {
public:
    // Throws InvalidArgument unless 0 < delta < 1.
    static Smoothing from_delta(double delta);

    double delta() const noexcept { return delta_; }
    double mu() const noexcept { return mu_; }
    // Variance of the per-step coefficient increment in the equivalent
    // state-space model, 1 / mu.
    double state_noise() const noexcept { return 1.0 / mu_; }

private:
    Smoothing(double delta, double mu) : delta_(delta), mu_(mu) {}

    double delta_;
    double mu_;
};

}  // namespace flsarb
