#include "gsde/model.hpp"

#include <cmath>
#include <string>

#include "gsde/errors.hpp"

namespace gsde {

void ModelSpec::validate() const {
    if (!drift) {
        throw ConfigError("model has no drift function");
    }
    if (!qv_drift) {
        throw ConfigError("model has no quadratic-variation drift function");
    }
    if (!std::isfinite(theta_min) || !std::isfinite(theta_max) || !(theta_min < theta_max)) {
        throw ConfigError("parameter set must satisfy theta_min < theta_max, got [" +
                          std::to_string(theta_min) + ", " + std::to_string(theta_max) + "]");
    }
    if (!std::isfinite(true_theta)) {
        throw ConfigError("true_theta must be finite");
    }
    initial_law.validate();
}

ModelSpec ModelSpec::ornstein_uhlenbeck(double theta0, double theta_min, double theta_max,
                                        GNormalSpec initial_law) {
    ModelSpec model;
    model.drift = [](double theta, double x) { return -theta * x; };
    model.qv_drift = [](double) { return 0.0; };
    model.true_theta = theta0;
    model.theta_min = theta_min;
    model.theta_max = theta_max;
    model.initial_law = initial_law;
    model.validate();
    return model;
}

void GridConfig::validate() const {
    if (n < 1) {
        throw ConfigError("grid needs n >= 1 steps, got n = " + std::to_string(n));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("grid needs dt > 0, got dt = " + std::to_string(dt));
    }
    if (m < 1) {
        throw ConfigError("grid needs m >= 1 scenarios, got m = " + std::to_string(m));
    }
    if (replicates < 1) {
        throw ConfigError("grid needs at least one replicate per scenario, got J = " +
                          std::to_string(replicates));
    }
}

ScenarioPath ScenarioPath::constant(double scenario_var, std::size_t n, double initial_var) {
    ScenarioPath scenario;
    scenario.scenario_var = scenario_var;
    scenario.initial_var = initial_var;
    scenario.per_step_var.assign(n, scenario_var);
    return scenario;
}

void SamplePath::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw UsageError("sample path needs dt > 0");
    }
    const std::size_t n = increments_b.size();
    if (values.size() != n + 1 || times.size() != n + 1 ||
        scenario.per_step_var.size() != n || n == 0) {
        throw UsageError("sample path arrays are inconsistent: " +
                         std::to_string(values.size()) + " values, " +
                         std::to_string(times.size()) + " times, " +
                         std::to_string(n) + " increments, " +
                         std::to_string(scenario.per_step_var.size()) + " step variances");
    }
    for (double v : scenario.per_step_var) {
        if (!(v > 0.0)) {
            throw UsageError("sample path has a nonpositive step variance");
        }
    }
}

}  // namespace gsde
