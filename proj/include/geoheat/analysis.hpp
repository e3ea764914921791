#pragma once

#include <utility>
#include <vector>

namespace geoheat {

/// Least-squares fit of log(E(tau) - E_final) against tau over the
/// mid-decay window: after 10% of the total decay, before the last 1%.
struct DecayFit {
    bool ok = false;      // false when the window has < min_samples points
    double rate = 0.0;    // positive decay rate (-slope)
    double intercept = 0.0;
    double r_squared = 0.0;
    int samples = 0;
};

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& energy_trace,
                        int min_samples = 10);

}  // namespace geoheat
