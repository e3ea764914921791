#include "geoheat/analysis.hpp"

#include <cmath>

namespace geoheat {

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& energy_trace,
                        int min_samples) {
    DecayFit fit;
    if (energy_trace.size() < 3) return fit;

    const double e0 = energy_trace.front().second;
    const double ef = energy_trace.back().second;
    const double decay = e0 - ef;
    if (!(decay > 0.0)) return fit;

    const double hi = e0 - 0.10 * decay;  // skip the initial transient
    const double lo = ef + 0.01 * decay;  // stop before the quantization floor

    // Linear regression of y = log(E - ef) on tau inside the window.
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [tau, e] : energy_trace) {
        if (e > hi || e < lo) continue;
        const double gap = e - ef;
        if (!(gap > 0.0)) continue;
        const double y = std::log(gap);
        n += 1.0;
        sx += tau;
        sy += y;
        sxx += tau * tau;
        sxy += tau * y;
        syy += y * y;
    }
    fit.samples = static_cast<int>(n);
    if (fit.samples < min_samples) return fit;

    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return fit;
    const double slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - slope * sx) / n;
    fit.rate = -slope;

    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [tau, e] : energy_trace) {
        if (e > hi || e < lo) continue;
        const double gap = e - ef;
        if (!(gap > 0.0)) continue;
        const double pred = fit.intercept + slope * tau;
        const double r = std::log(gap) - pred;
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.ok = true;
    return fit;
}

}  // namespace geoheat
