#pragma once

#include <span>

#include "gsde/model.hpp"

namespace gsde {

/// Weighted least-squares contrast
///   S(theta) = sum_i |dX_i - a(theta, X_{i-1}) dt - b(X_{i-1}) v_{i-1} dt|^2
///              / (v_{i-1} dt),
/// where v_{i-1} is the scenario variance on step i. Throws DomainError when
/// theta is outside [theta_min, theta_max].
double objective(const ModelSpec& model, const SamplePath& path, double theta);

/// Normalised contrast gap T^{-1} (S(theta) - S(true_theta)); zero at the
/// simulation truth by construction.
double q_function(const ModelSpec& model, const SamplePath& path, double theta);

/// Minimiser of the contrast over [theta_min, theta_max]: a 64-point scan
/// picks the bracket (ties resolved toward smaller theta), then golden-
/// section search shrinks it below tol. Deterministic for a given path.
/// Throws EstimationError if the objective is non-finite anywhere visited.
double argmin_lse(const ModelSpec& model, const SamplePath& path, double tol = 1e-8);

/// Closed-form minimiser for the linear-pull model a = -theta x, b = 0:
///   theta_hat = -sum w_i X_{i-1} dX_i / sum w_i X_{i-1}^2 dt,  w_i = 1/v_{i-1}.
/// With constant scenario variance the weights cancel. Throws
/// DegeneratePathError when the denominator vanishes.
double ou_closed_form(const SamplePath& path);

/// One replicate's estimate: scenario index k and replicate index j, 1-based.
struct EstimateRecord {
    int k = 0;
    int j = 0;
    double theta_hat = 0.0;
};

/// Mean of |theta_hat| over one scenario's replicates. All records must
/// share the same k; mixed scenarios throw UsageError.
double round_mean_abs(std::span<const EstimateRecord> records);

}  // namespace gsde
