#include "gsde/estimator.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gsde/errors.hpp"

namespace gsde {

namespace {

// Core contrast sum; callers have validated model, path, and theta.
double objective_unchecked(const ModelSpec& model, const SamplePath& path, double theta) {
    const std::size_t n = path.steps();
    const double dt = path.dt;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = path.values[i];
        const double v = path.scenario.per_step_var[i];
        const double r = path.values[i + 1] - x - model.drift(theta, x) * dt -
                         model.qv_drift(x) * v * dt;
        sum += r * r / (v * dt);
    }
    return sum;
}

void check_theta(const ModelSpec& model, double theta) {
    if (!(theta >= model.theta_min) || !(theta <= model.theta_max)) {
        throw DomainError("theta = " + std::to_string(theta) + " is outside [" +
                          std::to_string(model.theta_min) + ", " +
                          std::to_string(model.theta_max) + "]");
    }
}

double finite_objective(const ModelSpec& model, const SamplePath& path, double theta) {
    const double value = objective_unchecked(model, path, theta);
    if (!std::isfinite(value)) {
        throw EstimationError("objective is not finite at theta = " + std::to_string(theta));
    }
    return value;
}

}  // namespace

double objective(const ModelSpec& model, const SamplePath& path, double theta) {
    model.validate();
    path.validate();
    check_theta(model, theta);
    return objective_unchecked(model, path, theta);
}

double q_function(const ModelSpec& model, const SamplePath& path, double theta) {
    model.validate();
    path.validate();
    check_theta(model, theta);
    check_theta(model, model.true_theta);
    return (objective_unchecked(model, path, theta) -
            objective_unchecked(model, path, model.true_theta)) /
           path.horizon();
}

double argmin_lse(const ModelSpec& model, const SamplePath& path, double tol) {
    model.validate();
    path.validate();
    if (!(tol > 0.0)) {
        throw UsageError("argmin tolerance must be positive, got " + std::to_string(tol));
    }

    // Coarse scan; the strict '<' keeps the smallest theta on ties.
    constexpr int kScanPoints = 64;
    const double lo = model.theta_min;
    const double hi = model.theta_max;
    auto scan_theta = [&](int i) {
        return lo + (hi - lo) * static_cast<double>(i) / (kScanPoints - 1);
    };
    int best = 0;
    double best_value = finite_objective(model, path, scan_theta(0));
    for (int i = 1; i < kScanPoints; ++i) {
        const double value = finite_objective(model, path, scan_theta(i));
        if (value < best_value) {
            best = i;
            best_value = value;
        }
    }
    double a = scan_theta(best > 0 ? best - 1 : 0);
    double b = scan_theta(best + 1 < kScanPoints ? best + 1 : kScanPoints - 1);

    // Golden-section search on [a, b]; '<=' shifts ties toward smaller theta.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = finite_objective(model, path, c);
    double fd = finite_objective(model, path, d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = finite_objective(model, path, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = finite_objective(model, path, d);
        }
    }
    return 0.5 * (a + b);
}

double ou_closed_form(const SamplePath& path) {
    path.validate();
    const std::size_t n = path.steps();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = path.values[i];
        const double w = 1.0 / path.scenario.per_step_var[i];
        num -= w * x * (path.values[i + 1] - x);
        den += w * x * x * path.dt;
    }
    if (den == 0.0) {
        throw DegeneratePathError("closed-form estimator has a zero denominator");
    }
    return num / den;
}

double round_mean_abs(std::span<const EstimateRecord> records) {
    if (records.empty()) {
        throw UsageError("round mean needs at least one estimate");
    }
    const int k = records.front().k;
    double sum = 0.0;
    for (const auto& rec : records) {
        if (rec.k != k) {
            throw UsageError("round mean mixes scenarios " + std::to_string(k) + " and " +
                             std::to_string(rec.k));
        }
        sum += std::abs(rec.theta_hat);
    }
    return sum / static_cast<double>(records.size());
}

}  // namespace gsde
