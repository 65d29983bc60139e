#pragma once

#include <vector>

#include "gsde/rng.hpp"

namespace gsde {

/// Variance uncertainty set [lower_var, upper_var] of the driving noise.
/// A degenerate interval (lower == upper) is permitted and recovers the
/// classical single-measure case.
struct VarianceInterval {
    double lower_var = 0.0;
    double upper_var = 0.0;

    // Throws ConfigError unless 0 < lower_var <= upper_var < inf.
    void validate() const;

    bool contains(double v) const noexcept {
        return lower_var <= v && v <= upper_var;
    }
    bool degenerate() const noexcept { return lower_var == upper_var; }
};

/// Generator of the sublinear expectation with variance set [lower, upper]:
///   g(alpha) = (upper * alpha^+ - lower * alpha^-) / 2.
double g_function(double alpha, const VarianceInterval& iv);

/// Volatility scenarios: m variances whose square roots are equally spaced
/// between sqrt(lower_var) and sqrt(upper_var). The first and last points
/// are the interval endpoints, bit-exact.
struct ScenarioGrid {
    std::vector<double> points;  // variances, increasing; all equal when degenerate

    int size() const noexcept { return static_cast<int>(points.size()); }
};

// Requires m >= 2; throws ConfigError otherwise.
ScenarioGrid build_scenario_grid(const VarianceInterval& iv, int m);

// Grid points for experiment pipelines: same as build_scenario_grid, except
// m == 1 is accepted for a degenerate interval (the single-scenario case).
std::vector<double> scenario_points(const VarianceInterval& iv, int m);

/// Law of a maximally distributed (G-normal style) variable: mean and a
/// variance interval. Sampling picks one scenario variance from the interval.
struct GNormalSpec {
    double mean = 0.0;
    VarianceInterval var_interval;

    void validate() const;
};

/// One draw under a fixed scenario: mean + sqrt(scenario_var) * Z. The
/// scenario variance must lie in the interval; 0 is accepted as the
/// degenerate point-mass limit and yields exactly spec.mean.
double sample_g_normal(const GNormalSpec& spec, double scenario_var, CounterRng& rng);

/// Upper/lower envelope of per-scenario Monte Carlo means: upper estimates
/// the sublinear (max) expectation, lower the conjugate (min) one.
struct EnvelopeEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> per_scenario_means;
};

// Throws UsageError on an empty input.
EnvelopeEstimate envelope_over_scenarios(std::vector<double> per_scenario_means);

}  // namespace gsde
