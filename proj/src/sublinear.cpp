#include "gsde/sublinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gsde/errors.hpp"

namespace gsde {

void VarianceInterval::validate() const {
    if (!(lower_var > 0.0) || !std::isfinite(lower_var) || !std::isfinite(upper_var)) {
        throw ConfigError("variance interval must satisfy 0 < lower <= upper < inf, got [" +
                          std::to_string(lower_var) + ", " + std::to_string(upper_var) + "]");
    }
    if (lower_var > upper_var) {
        throw ConfigError("variance interval is inverted: lower " + std::to_string(lower_var) +
                          " > upper " + std::to_string(upper_var));
    }
}

double g_function(double alpha, const VarianceInterval& iv) {
    iv.validate();
    const double pos = std::max(alpha, 0.0);
    const double neg = std::max(-alpha, 0.0);
    return 0.5 * (iv.upper_var * pos - iv.lower_var * neg);
}

ScenarioGrid build_scenario_grid(const VarianceInterval& iv, int m) {
    iv.validate();
    if (m < 2) {
        throw ConfigError("scenario grid needs m >= 2, got m = " + std::to_string(m));
    }
    ScenarioGrid grid;
    grid.points.resize(static_cast<std::size_t>(m));
    if (iv.degenerate()) {
        std::fill(grid.points.begin(), grid.points.end(), iv.lower_var);
        return grid;
    }
    // Equal steps in volatility, not variance; endpoints forced bit-exact.
    const double s_lo = std::sqrt(iv.lower_var);
    const double s_hi = std::sqrt(iv.upper_var);
    grid.points.front() = iv.lower_var;
    grid.points.back() = iv.upper_var;
    for (int i = 1; i + 1 < m; ++i) {
        const double s = s_lo + (s_hi - s_lo) * static_cast<double>(i) / (m - 1);
        grid.points[static_cast<std::size_t>(i)] = s * s;
    }
    for (int i = 1; i < m; ++i) {
        if (!(grid.points[static_cast<std::size_t>(i)] > grid.points[static_cast<std::size_t>(i - 1)])) {
            throw ConfigError("scenario grid is not strictly increasing; m = " +
                              std::to_string(m) + " is too fine for the interval");
        }
    }
    return grid;
}

std::vector<double> scenario_points(const VarianceInterval& iv, int m) {
    if (m == 1) {
        iv.validate();
        if (!iv.degenerate()) {
            throw ConfigError("m = 1 needs a degenerate variance interval; got [" +
                              std::to_string(iv.lower_var) + ", " +
                              std::to_string(iv.upper_var) + "]");
        }
        return {iv.lower_var};
    }
    return build_scenario_grid(iv, m).points;
}

void GNormalSpec::validate() const {
    if (!std::isfinite(mean)) {
        throw ConfigError("mean of the initial law must be finite");
    }
    var_interval.validate();
}

double sample_g_normal(const GNormalSpec& spec, double scenario_var, CounterRng& rng) {
    spec.validate();
    if (scenario_var != 0.0 && !spec.var_interval.contains(scenario_var)) {
        throw ConfigError("scenario variance " + std::to_string(scenario_var) +
                          " lies outside [" + std::to_string(spec.var_interval.lower_var) +
                          ", " + std::to_string(spec.var_interval.upper_var) + "]");
    }
    return spec.mean + std::sqrt(scenario_var) * rng.normal();
}

EnvelopeEstimate envelope_over_scenarios(std::vector<double> per_scenario_means) {
    if (per_scenario_means.empty()) {
        throw UsageError("envelope needs at least one scenario mean");
    }
    const auto [lo, hi] =
        std::minmax_element(per_scenario_means.begin(), per_scenario_means.end());
    EnvelopeEstimate est;
    est.lower = *lo;
    est.upper = *hi;
    est.per_scenario_means = std::move(per_scenario_means);
    return est;
}

}  // namespace gsde
