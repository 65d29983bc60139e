#include "gsde/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>

#include "gsde/csv_io.hpp"
#include "gsde/errors.hpp"
#include "gsde/parallel.hpp"
#include "gsde/simulate.hpp"

namespace gsde {

namespace {

// Piecewise-linear table f: drift a(theta, x) = -theta * f(x), clamped to
// the table's range outside it so the coefficients stay bounded.
struct DriftTable {
    std::vector<double> xs;
    std::vector<double> fs;

    double operator()(double x) const {
        if (x <= xs.front()) return fs.front();
        if (x >= xs.back()) return fs.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        const std::size_t lo = hi - 1;
        const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return fs[lo] + w * (fs[hi] - fs[lo]);
    }
};

DriftTable load_drift_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open drift table '" + path + "'");
    }
    DriftTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string x_str, f_str;
        if (!std::getline(row, x_str, ',') || !std::getline(row, f_str)) {
            throw ConfigError("drift table '" + path + "' line " + std::to_string(line_no) +
                              " is not 'x,f'");
        }
        try {
            table.xs.push_back(std::stod(x_str));
            table.fs.push_back(std::stod(f_str));
        } catch (const std::exception&) {
            throw ConfigError("drift table '" + path + "' line " + std::to_string(line_no) +
                              " has a non-numeric field");
        }
    }
    if (table.xs.size() < 2) {
        throw ConfigError("drift table '" + path + "' needs at least 2 rows");
    }
    for (std::size_t i = 1; i < table.xs.size(); ++i) {
        if (!(table.xs[i] > table.xs[i - 1])) {
            throw ConfigError("drift table '" + path + "' must have strictly increasing x");
        }
    }
    return table;
}

enum class EstimatorKind { ClosedForm, Argmin };

EntryResult run_entry(const ModelSpec& model, const ExperimentConfig& cfg, std::int64_t n,
                      int replicates, EstimatorKind estimator) {
    const double T = cfg.sqrt_horizon
                         ? cfg.dt * std::sqrt(static_cast<double>(n))
                         : cfg.dt * static_cast<double>(n);
    const double dt = T / static_cast<double>(n);

    GridConfig grid{n, dt, cfg.m, replicates, cfg.seed};
    grid.validate();
    const std::vector<double> noise_pts = scenario_points(cfg.noise_var, cfg.m);
    const std::vector<double> init_pts = scenario_points(cfg.initial_var, cfg.m);

    const std::size_t m = noise_pts.size();
    const std::size_t J = static_cast<std::size_t>(replicates);

    EntryResult entry;
    entry.records.resize(m * J);
    parallel_for(m * J, cfg.threads, [&](std::size_t idx) {
        const int k = static_cast<int>(idx / J);
        const int j = static_cast<int>(idx % J);
        CounterRng rng = path_stream(cfg.seed, n, k, j);
        const ScenarioPath scenario = ScenarioPath::constant(
            noise_pts[static_cast<std::size_t>(k)], static_cast<std::size_t>(n),
            init_pts[static_cast<std::size_t>(k)]);
        try {
            const SamplePath path = simulate_path(model, scenario, grid, rng);
            const double theta_hat = estimator == EstimatorKind::ClosedForm
                                         ? ou_closed_form(path)
                                         : argmin_lse(model, path, cfg.argmin_tol);
            entry.records[idx] = EstimateRecord{k + 1, j + 1, theta_hat};
        } catch (const SimulationDiverged& e) {
            throw SimulationDiverged(e.step(), std::string(e.what()) + " (n = " +
                                                   std::to_string(n) + ", k = " +
                                                   std::to_string(k + 1) + ", j = " +
                                                   std::to_string(j + 1) + ")");
        }
    });

    entry.round_means.resize(m);
    entry.round_mean_std_errs.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::span<const EstimateRecord> round(entry.records.data() + k * J, J);
        const double mean = round_mean_abs(round);
        double ss = 0.0;
        for (const auto& rec : round) {
            const double d = std::abs(rec.theta_hat) - mean;
            ss += d * d;
        }
        entry.round_means[k] = mean;
        entry.round_mean_std_errs[k] =
            J > 1 ? std::sqrt(ss / (static_cast<double>(J) - 1.0) / static_cast<double>(J))
                  : 0.0;
    }

    const EnvelopeEstimate envelope = envelope_over_scenarios(entry.round_means);
    entry.row = EnvelopeRow{n, T, cfg.m, replicates, cfg.seed,
                            envelope.lower, envelope.upper, envelope.upper - envelope.lower};
    return entry;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (model != "ou" && model != "table") {
        throw ConfigError("unknown model '" + model + "' (expected 'ou' or 'table')");
    }
    if (model == "table" && drift_table_path.empty()) {
        throw ConfigError("model 'table' needs --drift-table");
    }
    noise_var.validate();
    initial_var.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("dt must be positive, got " + std::to_string(dt));
    }
    if (!(theta_min < theta_max)) {
        throw ConfigError("parameter set must satisfy theta_min < theta_max");
    }
    if (m < 1) {
        throw ConfigError("m must be at least 1, got " + std::to_string(m));
    }
    if (replicates < 1) {
        throw ConfigError("J must be at least 1, got " + std::to_string(replicates));
    }
    if (table2_n < 1) {
        throw ConfigError("n must be at least 1, got " + std::to_string(table2_n));
    }
    if (threads < 1) {
        throw ConfigError("threads must be at least 1, got " + std::to_string(threads));
    }
    if (!(argmin_tol > 0.0)) {
        throw ConfigError("argmin tolerance must be positive");
    }
    for (const auto n : n_schedule) {
        if (n < 1) {
            throw ConfigError("n schedule entries must be positive, got " + std::to_string(n));
        }
    }
    for (const auto J : j_schedule) {
        if (J < 1) {
            throw ConfigError("J schedule entries must be positive, got " + std::to_string(J));
        }
    }
}

ModelSpec ExperimentConfig::make_model() const {
    validate();
    GNormalSpec init{0.0, initial_var};
    if (model == "ou") {
        return ModelSpec::ornstein_uhlenbeck(theta0, theta_min, theta_max, init);
    }
    auto table = std::make_shared<DriftTable>(load_drift_table(drift_table_path));
    ModelSpec spec;
    spec.drift = [table](double theta, double x) { return -theta * (*table)(x); };
    spec.qv_drift = [](double) { return 0.0; };
    spec.true_theta = theta0;
    spec.theta_min = theta_min;
    spec.theta_max = theta_max;
    spec.initial_law = init;
    spec.validate();
    return spec;
}

CounterRng path_stream(std::uint64_t seed, std::int64_t n, int k, int j) {
    return CounterRng::from_seed(seed)
        .child(static_cast<std::uint64_t>(n))
        .child(static_cast<std::uint64_t>(k))
        .child(static_cast<std::uint64_t>(j));
}

ExperimentResult run_table1(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.n_schedule.empty()) {
        throw ConfigError("n schedule is empty");
    }
    const ModelSpec model = cfg.make_model();
    const EstimatorKind kind =
        cfg.model == "ou" ? EstimatorKind::ClosedForm : EstimatorKind::Argmin;
    ExperimentResult result;
    for (const auto n : cfg.n_schedule) {
        result.entries.push_back(run_entry(model, cfg, n, cfg.replicates, kind));
    }
    return result;
}

ExperimentResult run_table2(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.j_schedule.empty()) {
        throw ConfigError("J schedule is empty");
    }
    const ModelSpec model = cfg.make_model();
    const EstimatorKind kind =
        cfg.model == "ou" ? EstimatorKind::ClosedForm : EstimatorKind::Argmin;
    ExperimentResult result;
    for (const auto J : cfg.j_schedule) {
        result.entries.push_back(run_entry(model, cfg, cfg.table2_n, J, kind));
    }
    return result;
}

ExperimentResult run_custom(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.n_schedule.empty()) {
        throw ConfigError("n schedule is empty");
    }
    const ModelSpec model = cfg.make_model();
    ExperimentResult result;
    for (const auto n : cfg.n_schedule) {
        result.entries.push_back(run_entry(model, cfg, n, cfg.replicates, EstimatorKind::Argmin));
    }
    return result;
}

void write_envelope_csv(std::ostream& out, std::span<const EnvelopeRow> rows) {
    out << kEnvelopeCsvHeader << '\n';
    for (const auto& row : rows) {
        out << row.n << ',' << format_double(row.T) << ',' << row.m << ',' << row.J << ','
            << row.seed << ',' << format_double(row.lower) << ',' << format_double(row.upper)
            << ',' << format_double(row.gap) << '\n';
    }
}

void write_rounds_csv(std::ostream& out, std::span<const EstimateRecord> records) {
    out << kRoundsCsvHeader << '\n';
    for (const auto& rec : records) {
        out << rec.k << ',' << rec.j << ',' << format_double(rec.theta_hat) << '\n';
    }
}

}  // namespace gsde
