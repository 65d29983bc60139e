// Command-line front end: envelope experiments, raw path dumps, and the
// empirical inequality checks. Results go to stdout or --out files;
// progress goes to stderr.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsde/csv_io.hpp"
#include "gsde/errors.hpp"
#include "gsde/experiment.hpp"
#include "gsde/inequality.hpp"
#include "gsde/simulate.hpp"

namespace {

struct CliState {
    gsde::ExperimentConfig cfg;
    std::string out_path;
    std::string rounds_out_path;
    std::string horizon_scaling = "linear";

    // simulate
    std::int64_t sim_n = 1000;
    int sim_replicates = 1;

    // verify
    long exp_trials = 100000;
    int exp_m = 5;
    double exp_alpha = 2.0;
    double exp_beta = 2.0;
    double exp_horizon = 1.0;
    long sup_trials = 20000;
    double sup_p = 2.0;
    long gap_trials = 10000;
    double ergodic_horizon = 5000.0;
    double ergodic_tol = 0.03;
};

void add_common_options(CLI::App* sub, CliState& state) {
    auto& cfg = state.cfg;
    sub->add_option("--seed", cfg.seed, "Experiment seed")->capture_default_str();
    sub->add_option("--m", cfg.m, "Scenario count")->capture_default_str();
    sub->add_option("--dt", cfg.dt, "Step size")->capture_default_str();
    sub->add_option("--theta0", cfg.theta0, "Simulation truth")->capture_default_str();
    sub->add_option("--theta-min", cfg.theta_min, "Lower edge of the parameter set")
        ->capture_default_str();
    sub->add_option("--theta-max", cfg.theta_max, "Upper edge of the parameter set")
        ->capture_default_str();
    sub->add_option("--sigma2-lo", cfg.noise_var.lower_var, "Lower driving-noise variance")
        ->capture_default_str();
    sub->add_option("--sigma2-hi", cfg.noise_var.upper_var, "Upper driving-noise variance")
        ->capture_default_str();
    sub->add_option("--init-var-lo", cfg.initial_var.lower_var,
                    "Lower variance of the initial law")
        ->capture_default_str();
    sub->add_option("--init-var-hi", cfg.initial_var.upper_var,
                    "Upper variance of the initial law")
        ->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
    sub->add_option("--out", state.out_path, "Write the result CSV/JSON here (default stdout)");
    // --config lives on the root app; let it catch flags the subcommand
    // does not know.
    sub->fallthrough();
}

void add_schedule_options(CLI::App* sub, CliState& state, bool n_is_schedule,
                          bool j_is_schedule) {
    auto& cfg = state.cfg;
    if (n_is_schedule) {
        sub->add_option("--n", cfg.n_schedule, "Step-count schedule")->capture_default_str();
    }
    if (j_is_schedule) {
        auto* n_opt =
            sub->add_option("--n", cfg.table2_n, "Steps per path")->capture_default_str();
        sub->add_option_function<double>(
               "--T",
               [&cfg](const double& T) {
                   if (!(T > 0.0) || !(cfg.dt > 0.0)) {
                       throw CLI::ValidationError("--T", "needs T > 0 and dt > 0");
                   }
                   cfg.table2_n = static_cast<std::int64_t>(std::llround(T / cfg.dt));
               },
               "Horizon; sets n = T / dt")
            ->excludes(n_opt);
        sub->add_option("--J", cfg.j_schedule, "Replicate schedule")->capture_default_str();
    } else {
        sub->add_option("--J", cfg.replicates, "Replicates per scenario")
            ->capture_default_str();
    }
    sub->add_option("--rounds-out", state.rounds_out_path,
                    "Also write per-replicate estimates (suffixed per entry)");
    sub->add_option("--horizon-scaling", state.horizon_scaling,
                    "linear: T = n dt; sqrt: T = dt sqrt(n)")
        ->check(CLI::IsMember({"linear", "sqrt"}))
        ->capture_default_str();
}

std::string entry_suffix_path(const std::string& base, const std::string& tag) {
    const std::size_t dot = base.find_last_of('.');
    const std::size_t slash = base.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return base + "_" + tag;
    }
    return base.substr(0, dot) + "_" + tag + base.substr(dot);
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw gsde::ConfigError("cannot open '" + path + "' for writing");
    }
    return out;
}

void emit_experiment(const gsde::ExperimentResult& result, const CliState& state,
                     bool tag_by_n) {
    std::vector<gsde::EnvelopeRow> rows;
    rows.reserve(result.entries.size());
    for (const auto& entry : result.entries) {
        rows.push_back(entry.row);
    }
    if (state.out_path.empty()) {
        gsde::write_envelope_csv(std::cout, rows);
    } else {
        auto out = open_or_throw(state.out_path);
        gsde::write_envelope_csv(out, rows);
        std::cerr << "wrote " << rows.size() << " rows to " << state.out_path << "\n";
    }
    if (state.rounds_out_path.empty()) {
        return;
    }
    for (const auto& entry : result.entries) {
        std::string path = state.rounds_out_path;
        if (result.entries.size() > 1) {
            const std::string tag = tag_by_n ? "n" + std::to_string(entry.row.n)
                                             : "J" + std::to_string(entry.row.J);
            path = entry_suffix_path(path, tag);
        }
        auto out = open_or_throw(path);
        gsde::write_rounds_csv(out, entry.records);
        std::cerr << "wrote " << entry.records.size() << " estimates to " << path << "\n";
    }
}

int run_experiment_command(const CliState& state, const std::string& which) {
    auto cfg = state.cfg;
    cfg.sqrt_horizon = state.horizon_scaling == "sqrt";
    const auto started = std::chrono::steady_clock::now();
    gsde::ExperimentResult result;
    bool tag_by_n = true;
    if (which == "table1") {
        result = gsde::run_table1(cfg);
    } else if (which == "table2") {
        result = gsde::run_table2(cfg);
        tag_by_n = false;
    } else {
        result = gsde::run_custom(cfg);
    }
    const auto seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cerr << which << ": " << result.entries.size() << " entries in " << seconds
              << " s\n";
    emit_experiment(result, state, tag_by_n);
    return 0;
}

int run_simulate_command(const CliState& state) {
    auto cfg = state.cfg;
    cfg.validate();
    const gsde::ModelSpec model = cfg.make_model();
    const auto noise = gsde::scenario_points(cfg.noise_var, cfg.m);
    const auto init = gsde::scenario_points(cfg.initial_var, cfg.m);
    gsde::GridConfig grid{state.sim_n, cfg.dt, cfg.m, state.sim_replicates, cfg.seed};
    grid.validate();

    std::ostringstream buffer;
    gsde::write_path_csv_header(buffer);
    for (int k = 0; k < cfg.m; ++k) {
        for (int j = 0; j < state.sim_replicates; ++j) {
            gsde::CounterRng rng = gsde::path_stream(cfg.seed, state.sim_n, k, j);
            const auto scenario = gsde::ScenarioPath::constant(
                noise[static_cast<std::size_t>(k)], static_cast<std::size_t>(state.sim_n),
                init[static_cast<std::size_t>(k)]);
            const auto path = gsde::simulate_path(model, scenario, grid, rng);
            gsde::append_path_csv(buffer, k + 1, j + 1, path);
        }
    }
    if (state.out_path.empty()) {
        std::cout << buffer.str();
    } else {
        auto out = open_or_throw(state.out_path);
        out << buffer.str();
        std::cerr << "wrote " << cfg.m * state.sim_replicates << " paths to "
                  << state.out_path << "\n";
    }
    return 0;
}

int run_verify_command(const CliState& state) {
    auto cfg = state.cfg;
    cfg.validate();
    const gsde::ModelSpec model = cfg.make_model();
    const gsde::CounterRng root = gsde::CounterRng::from_seed(cfg.seed);
    std::vector<gsde::InequalityReport> reports;

    {
        gsde::ScenarioSweep sweep{cfg.noise_var, state.exp_m};
        gsde::GIntegrand g{[](double) { return 1.0; }, "1"};
        reports.push_back(gsde::verify_exp_martingale(sweep, g, state.exp_horizon,
                                                      state.exp_alpha, state.exp_beta,
                                                      state.exp_trials, root.child(1001),
                                                      cfg.threads));
    }
    {
        gsde::ScenarioSweep sweep{cfg.noise_var, state.exp_m};
        reports.push_back(gsde::verify_bdg_moment(sweep, state.sup_p, 0.0, 1.0,
                                                  state.sup_trials, root.child(1002), 1.0,
                                                  cfg.threads));
    }
    {
        gsde::ScenarioSweep sweep{cfg.noise_var, cfg.m};
        const std::vector<std::pair<double, double>> gaps{
            {0.0, 0.01}, {0.0, 0.02}, {0.0, 0.05}, {0.0, 0.1}};
        reports.push_back(gsde::verify_increment_moments(model, sweep, 1.0, gaps,
                                                         state.gap_trials, root.child(1003),
                                                         32, cfg.threads));
        reports.push_back(gsde::verify_increment_moments(model, sweep, 2.0, gaps,
                                                         state.gap_trials, root.child(1004),
                                                         32, cfg.threads));
    }
    {
        gsde::ScenarioSweep sweep{cfg.noise_var, cfg.m};
        const auto n = static_cast<std::int64_t>(std::llround(state.ergodic_horizon / cfg.dt));
        gsde::GridConfig grid{n, cfg.dt, cfg.m, 1, cfg.seed};
        reports.push_back(gsde::verify_ergodic_envelope(
            model, sweep, grid, [](double x) { return x * x; }, root.child(1005),
            state.ergodic_tol, cfg.threads));
    }

    bool all_passed = true;
    for (const auto& report : reports) {
        std::cout << report.summary_line() << "\n";
        all_passed = all_passed && report.passed;
    }
    if (!state.out_path.empty()) {
        auto out = open_or_throw(state.out_path);
        out << gsde::reports_to_json(reports) << "\n";
        std::cerr << "wrote " << reports.size() << " reports to " << state.out_path << "\n";
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Scenario-envelope Monte Carlo for drift estimation of SDEs driven by "
        "volatility-uncertain (G-Brownian) noise"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Read options from a key=value file with a [subcommand] section");
    app.allow_config_extras(CLI::config_extras_mode::error);
    CliState state;

    auto* table1 = app.add_subcommand(
        "table1", "Envelope estimates against a step-count schedule");
    add_common_options(table1, state);
    add_schedule_options(table1, state, /*n_is_schedule=*/true, /*j_is_schedule=*/false);

    auto* table2 = app.add_subcommand(
        "table2", "Envelope estimates against a replicate schedule");
    add_common_options(table2, state);
    add_schedule_options(table2, state, /*n_is_schedule=*/false, /*j_is_schedule=*/true);

    auto* custom = app.add_subcommand(
        "custom", "Envelope experiment through the argmin estimator");
    add_common_options(custom, state);
    add_schedule_options(custom, state, /*n_is_schedule=*/true, /*j_is_schedule=*/false);
    custom->add_option("--model", state.cfg.model, "'ou' or 'table'")->capture_default_str();
    custom->add_option("--drift-table", state.cfg.drift_table_path,
                       "CSV of x,f rows for model 'table'");
    custom->add_option("--tol", state.cfg.argmin_tol, "Argmin bracket tolerance")
        ->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Dump raw paths as CSV");
    add_common_options(simulate, state);
    simulate->add_option("--n", state.sim_n, "Steps per path")->capture_default_str();
    simulate->add_option("--J", state.sim_replicates, "Paths per scenario")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run the empirical inequality checks");
    add_common_options(verify, state);
    verify->add_option("--exp-trials", state.exp_trials, "Exceedance-rate trials")
        ->capture_default_str();
    verify->add_option("--exp-m", state.exp_m, "Scenario grid for the exceedance check")
        ->capture_default_str();
    verify->add_option("--alpha", state.exp_alpha, "Compensator weight")
        ->capture_default_str();
    verify->add_option("--beta", state.exp_beta, "Exceedance level")->capture_default_str();
    verify->add_option("--exp-T", state.exp_horizon, "Exceedance-check horizon")
        ->capture_default_str();
    verify->add_option("--sup-trials", state.sup_trials, "Sup-moment trials")
        ->capture_default_str();
    verify->add_option("--p", state.sup_p, "Sup-moment order (>= 2)")->capture_default_str();
    verify->add_option("--gap-trials", state.gap_trials, "Increment-moment trials")
        ->capture_default_str();
    verify->add_option("--ergodic-T", state.ergodic_horizon, "Ergodic-check horizon")
        ->capture_default_str();
    verify->add_option("--ergodic-tol", state.ergodic_tol, "Ergodic excursion tolerance")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (table1->parsed()) return run_experiment_command(state, "table1");
        if (table2->parsed()) return run_experiment_command(state, "table2");
        if (custom->parsed()) return run_experiment_command(state, "custom");
        if (simulate->parsed()) return run_simulate_command(state);
        return run_verify_command(state);
    } catch (const gsde::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gsde::SimulationDiverged& e) {
        std::cerr << "simulation diverged: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
