#include "gsde/simulate.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "gsde/errors.hpp"

namespace gsde {

std::vector<double> simulate_increments(double scenario_var, const GridConfig& cfg,
                                        CounterRng& rng) {
    cfg.validate();
    if (!(scenario_var >= 0.0) || !std::isfinite(scenario_var)) {
        throw ConfigError("scenario variance must be nonnegative and finite, got " +
                          std::to_string(scenario_var));
    }
    const double sd = std::sqrt(scenario_var * cfg.dt);
    std::vector<double> increments(static_cast<std::size_t>(cfg.n));
    for (double& db : increments) {
        db = sd * rng.normal();
    }
    return increments;
}

SamplePath euler_path(const ModelSpec& model, ScenarioPath scenario, double dt, double x0,
                      std::vector<double> increments) {
    model.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw UsageError("euler_path needs dt > 0");
    }
    const std::size_t n = increments.size();
    if (n == 0 || scenario.per_step_var.size() != n) {
        throw UsageError("euler_path needs matching increment and variance arrays, got " +
                         std::to_string(n) + " increments and " +
                         std::to_string(scenario.per_step_var.size()) + " variances");
    }

    SamplePath path;
    path.dt = dt;
    path.times.resize(n + 1);
    path.values.resize(n + 1);
    path.values[0] = x0;
    path.times[0] = 0.0;

    const double theta0 = model.true_theta;
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double drift_term = model.drift(theta0, x) * dt;
        const double qv_term = model.qv_drift(x) * scenario.per_step_var[i] * dt;
        x = ((x + drift_term) + qv_term) + increments[i];
        if (!std::isfinite(x) || std::abs(x) > kDivergenceGuard) {
            throw SimulationDiverged(i + 1, "path diverged at step " + std::to_string(i + 1) +
                                                " of " + std::to_string(n) +
                                                " (|x| > 1e12 or non-finite)");
        }
        path.values[i + 1] = x;
        path.times[i + 1] = static_cast<double>(i + 1) * dt;
    }
    path.increments_b = std::move(increments);
    path.scenario = std::move(scenario);
    return path;
}

SamplePath simulate_path(const ModelSpec& model, const ScenarioPath& scenario,
                         const GridConfig& cfg, CounterRng& rng) {
    model.validate();
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.n);
    if (scenario.per_step_var.size() != n) {
        throw UsageError("scenario has " + std::to_string(scenario.per_step_var.size()) +
                         " step variances but the grid has " + std::to_string(cfg.n) +
                         " steps");
    }

    // Draw order is part of the contract: X(0) first, then step increments.
    const double x0 = sample_g_normal(model.initial_law, scenario.initial_var, rng);
    std::vector<double> increments(n);
    for (std::size_t i = 0; i < n; ++i) {
        increments[i] = std::sqrt(scenario.per_step_var[i] * cfg.dt) * rng.normal();
    }
    return euler_path(model, scenario, cfg.dt, x0, std::move(increments));
}

AssumptionReport validate_assumptions(const ModelSpec& model,
                                      std::span<const AssumptionProbe> probes,
                                      AssumptionBounds bounds) {
    model.validate();
    if (probes.empty()) {
        throw UsageError("assumption check needs a nonempty probe grid");
    }
    AssumptionReport report;
    report.bounds = bounds;

    for (const auto& p : probes) {
        const double a = model.drift(p.theta, p.x);
        const double b = model.qv_drift(p.x);
        const double denom = 1.0 + p.x * p.x;
        report.max_drift_growth = std::max(report.max_drift_growth, a * a / denom);
        report.max_qv_growth = std::max(report.max_qv_growth, b * b / denom);
    }
    for (std::size_t i = 0; i < probes.size(); ++i) {
        for (std::size_t j = i + 1; j < probes.size(); ++j) {
            const double dx = probes[i].x - probes[j].x;
            if (dx == 0.0) continue;
            if (probes[i].theta == probes[j].theta) {
                const double da = model.drift(probes[i].theta, probes[i].x) -
                                  model.drift(probes[j].theta, probes[j].x);
                report.max_drift_lipschitz =
                    std::max(report.max_drift_lipschitz, std::abs(da / dx));
            }
            const double db = model.qv_drift(probes[i].x) - model.qv_drift(probes[j].x);
            report.max_qv_lipschitz = std::max(report.max_qv_lipschitz, std::abs(db / dx));
        }
    }
    report.flagged = report.max_drift_lipschitz > bounds.lipschitz_bound ||
                     report.max_qv_lipschitz > bounds.lipschitz_bound ||
                     report.max_drift_growth > bounds.growth_bound ||
                     report.max_qv_growth > bounds.growth_bound;
    return report;
}

}  // namespace gsde
