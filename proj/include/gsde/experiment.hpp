#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gsde/estimator.hpp"
#include "gsde/model.hpp"
#include "gsde/rng.hpp"

namespace gsde {

// Default experiment seed. Fixed so the bundled reference tables reproduce
// byte-identically out of the box.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Everything a run needs: the model, the scenario plan, and the schedules.
/// The two bundled experiments share this struct; run_table1 sweeps
/// n_schedule at fixed replicates, run_table2 sweeps j_schedule at fixed n.
struct ExperimentConfig {
    std::string model = "ou";          // "ou" or "table" (piecewise-linear drift)
    std::string drift_table_path;      // CSV "x,f" rows; used when model == "table"
    double theta0 = 1.0;
    double theta_min = 0.1;
    double theta_max = 5.0;
    VarianceInterval noise_var{0.5, 1.0};
    VarianceInterval initial_var{0.4, 0.6};
    double dt = 0.01;
    std::vector<std::int64_t> n_schedule{10000, 20000, 30000, 40000, 50000};
    std::vector<int> j_schedule{8, 16, 32, 64, 128};
    std::int64_t table2_n = 5000;      // fixed n for the replicate sweep
    int m = 10;
    int replicates = 512;              // J for the n sweep
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
    bool sqrt_horizon = false;         // T = dt * sqrt(n) instead of T = n * dt
    double argmin_tol = 1e-8;

    void validate() const;
    ModelSpec make_model() const;      // throws ConfigError on a bad drift table
};

/// One emitted table row; field order matches the envelope CSV.
struct EnvelopeRow {
    std::int64_t n = 0;
    double T = 0.0;
    int m = 0;
    int J = 0;
    std::uint64_t seed = 0;
    double lower = 0.0;
    double upper = 0.0;
    double gap = 0.0;
};

/// Full result of one schedule entry: the row plus the per-replicate
/// estimates behind it, in (k, j) index order.
struct EntryResult {
    EnvelopeRow row;
    std::vector<EstimateRecord> records;
    std::vector<double> round_means;           // m entries
    std::vector<double> round_mean_std_errs;   // standard error of each round mean
};

struct ExperimentResult {
    std::vector<EntryResult> entries;
};

/// Substream for path (k, j) of the entry tagged n: root(seed) -> child(n)
/// -> child(k) -> child(j), all 0-based. Replicate sets nest as J grows, and
/// entries with different n are independent.
CounterRng path_stream(std::uint64_t seed, std::int64_t n, int k, int j);

// Envelope sweep over n_schedule (closed form for "ou", argmin otherwise).
ExperimentResult run_table1(const ExperimentConfig& cfg);
// Envelope sweep over j_schedule at fixed n = table2_n.
ExperimentResult run_table2(const ExperimentConfig& cfg);
// n_schedule sweep that always estimates through argmin_lse.
ExperimentResult run_custom(const ExperimentConfig& cfg);

inline constexpr const char* kEnvelopeCsvHeader = "n,T,m,J,seed,lower,upper,gap";
inline constexpr const char* kRoundsCsvHeader = "k,j,theta_hat";

void write_envelope_csv(std::ostream& out, std::span<const EnvelopeRow> rows);
void write_rounds_csv(std::ostream& out, std::span<const EstimateRecord> records);

}  // namespace gsde
