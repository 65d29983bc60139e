#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gsde/sublinear.hpp"

namespace gsde {

using DriftFn = std::function<double(double /*theta*/, double /*x*/)>;
using QvDriftFn = std::function<double(double /*x*/)>;

/// Model under estimation:
///   dX = a(theta0, X) dt + b(X) d<B> + dB,   X(0) ~ initial_law,
/// where B is the driving noise with variance set [lower_var, upper_var] and
/// <B> its quadratic variation. theta ranges over the compact [theta_min,
/// theta_max]; true_theta is used by the simulator and diagnostics only.
struct ModelSpec {
    DriftFn drift;        // a(theta, x)
    QvDriftFn qv_drift;   // b(x)
    double true_theta = 1.0;
    double theta_min = 0.1;
    double theta_max = 5.0;
    GNormalSpec initial_law;

    void validate() const;

    // Linear pull toward zero: a(theta, x) = -theta * x, b = 0.
    static ModelSpec ornstein_uhlenbeck(double theta0, double theta_min, double theta_max,
                                        GNormalSpec initial_law);
};

/// Discretisation and replication plan for one experiment entry.
struct GridConfig {
    std::int64_t n = 1;        // steps per path
    double dt = 0.01;          // step size
    int m = 10;                // scenario count
    int replicates = 512;      // paths per scenario (J)
    std::uint64_t seed = 0;

    double horizon() const noexcept { return static_cast<double>(n) * dt; }
    void validate() const;
};

/// One volatility scenario: the driving-noise variance at each step plus the
/// variance selecting X(0)'s law within the initial interval.
struct ScenarioPath {
    double scenario_var = 0.0;          // headline value (constant scenarios)
    double initial_var = 0.0;
    std::vector<double> per_step_var;   // n entries, sigma^2 at the left endpoint

    static ScenarioPath constant(double scenario_var, std::size_t n, double initial_var);
};

/// Simulated trajectory on the uniform grid t_i = i * dt.
struct SamplePath {
    double dt = 0.0;
    std::vector<double> times;         // n + 1 entries
    std::vector<double> values;        // n + 1 entries, values[0] = X(0)
    std::vector<double> increments_b;  // n entries, step i holds B(t_i) - B(t_{i-1})
    ScenarioPath scenario;

    std::size_t steps() const noexcept { return increments_b.size(); }
    double horizon() const noexcept { return static_cast<double>(steps()) * dt; }

    // Throws UsageError on inconsistent lengths or nonpositive dt/variances.
    void validate() const;
};

}  // namespace gsde
