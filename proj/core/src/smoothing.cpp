#include "flsarb/smoothing.hpp"

#include <cmath>
#include <string>

#include "flsarb/error.hpp"

namespace flsarb {

Smoothing Smoothing::from_delta(double delta) {
    if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0) {
        throw InvalidArgument("delta must lie in (0, 1), got " + std::to_string(delta));
    }
    return Smoothing(delta, (1.0 - delta) / delta);
}

}  // namespace flsarb
