#pragma once

#include <span>
#include <vector>

#include "gsde/model.hpp"
#include "gsde/rng.hpp"

namespace gsde {

// Path values beyond this magnitude abort the simulation.
inline constexpr double kDivergenceGuard = 1e12;

/// Draws the n noise increments of one path under a constant scenario
/// variance: increment i ~ N(0, scenario_var * dt).
std::vector<double> simulate_increments(double scenario_var, const GridConfig& cfg,
                                        CounterRng& rng);

/// Deterministic Euler core. Starting from x0, applies
///   x_i = x_{i-1} + a(theta0, x_{i-1}) dt + b(x_{i-1}) v_{i-1} dt + dB_i
/// with the rounding order fixed as written, so the recursion can be
/// replayed bit-exactly from the stored arrays. Throws SimulationDiverged
/// (with the 1-based step index) once |x| exceeds kDivergenceGuard or x
/// stops being finite.
SamplePath euler_path(const ModelSpec& model, ScenarioPath scenario, double dt, double x0,
                      std::vector<double> increments);

/// Samples one full path: X(0) from the initial law under the scenario's
/// initial variance (two counter ticks), then each increment in step order
/// (two ticks per step). (stream, scenario, cfg) fully determine the path.
SamplePath simulate_path(const ModelSpec& model, const ScenarioPath& scenario,
                         const GridConfig& cfg, CounterRng& rng);

/// A (theta, x) point at which the regularity of the coefficients is probed.
struct AssumptionProbe {
    double theta = 0.0;
    double x = 0.0;
};

struct AssumptionBounds {
    double lipschitz_bound = 1e3;
    double growth_bound = 1e3;
};

/// Empirical Lipschitz quotients and squared-growth ratios of a and b over a
/// probe grid. flagged is set when any maximum exceeds its bound; this is a
/// diagnostic, not a proof.
struct AssumptionReport {
    double max_drift_lipschitz = 0.0;
    double max_qv_lipschitz = 0.0;
    double max_drift_growth = 0.0;   // max |a|^2 / (1 + x^2)
    double max_qv_growth = 0.0;      // max |b|^2 / (1 + x^2)
    AssumptionBounds bounds;
    bool flagged = false;
};

AssumptionReport validate_assumptions(const ModelSpec& model,
                                      std::span<const AssumptionProbe> probes,
                                      AssumptionBounds bounds = {});

}  // namespace gsde
