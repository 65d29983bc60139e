#include <doctest.h>

#include <cmath>
#include <vector>

#include "gsde/errors.hpp"
#include "gsde/simulate.hpp"

using namespace gsde;

namespace {

ModelSpec ou_model(double theta0 = 1.0) {
    return ModelSpec::ornstein_uhlenbeck(theta0, 0.1, 5.0, GNormalSpec{0.0, {0.4, 0.6}});
}

ModelSpec driftless_model() {
    ModelSpec model;
    model.drift = [](double, double) { return 0.0; };
    model.qv_drift = [](double) { return 0.0; };
    model.true_theta = 1.0;
    model.theta_min = 0.1;
    model.theta_max = 5.0;
    model.initial_law = GNormalSpec{0.0, {0.4, 0.6}};
    return model;
}

}  // namespace

TEST_CASE("increment law matches N(0, var dt)") {
    GridConfig cfg{1000000, 0.01, 2, 1, 0};
    CounterRng rng = CounterRng::from_seed(17);
    const auto increments = simulate_increments(0.75, cfg, rng);
    REQUIRE(increments.size() == 1000000);
    double s1 = 0.0, s2 = 0.0;
    for (double db : increments) {
        s1 += db;
        s2 += db * db;
    }
    const double mean = s1 / 1e6;
    const double var = s2 / 1e6 - mean * mean;
    CHECK(std::abs(mean) < 4.4e-4);                     // ~5 SE
    CHECK(var / (0.75 * 0.01) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("increments vanish with the step size") {
    GridConfig cfg{10000, 1e-12, 2, 1, 0};
    CounterRng rng = CounterRng::from_seed(18);
    for (double db : simulate_increments(0.5, cfg, rng)) {
        CHECK(std::abs(db) < 1e-4);
    }
}

TEST_CASE("increments reject a negative variance") {
    GridConfig cfg{10, 0.01, 2, 1, 0};
    CounterRng rng = CounterRng::from_seed(19);
    CHECK_THROWS_AS(simulate_increments(-0.5, cfg, rng), ConfigError);
}

TEST_CASE("noiseless linear-pull recursion contracts geometrically") {
    const auto model = ou_model(1.0);
    auto scenario = ScenarioPath::constant(0.5, 2, 0.5);
    const SamplePath path = euler_path(model, scenario, 0.1, 1.0, {0.0, 0.0});
    REQUIRE(path.values.size() == 3);
    CHECK(path.values[0] == 1.0);
    CHECK(path.values[1] == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(path.values[2] == doctest::Approx(0.81).epsilon(1e-14));
    CHECK(path.times[2] == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("zero coefficients accumulate the raw increments") {
    const auto model = driftless_model();
    const std::vector<double> increments{0.3, -0.1, 0.25, -0.4};
    auto scenario = ScenarioPath::constant(0.8, increments.size(), 0.5);
    const SamplePath path = euler_path(model, scenario, 0.05, 0.2, increments);
    double x = 0.2;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        x = ((x + 0.0) + 0.0) + increments[i];
        CHECK(path.values[i + 1] == x);
    }
}

TEST_CASE("stored arrays replay the recursion bit-exactly") {
    ModelSpec model;
    model.drift = [](double theta, double x) { return -theta * x + 0.2; };
    model.qv_drift = [](double x) { return 0.1 * x; };
    model.true_theta = 1.3;
    model.theta_min = 0.1;
    model.theta_max = 5.0;
    model.initial_law = GNormalSpec{0.0, {0.4, 0.6}};

    GridConfig cfg{200, 0.01, 2, 1, 0};
    auto scenario = ScenarioPath::constant(0.75, 200, 0.5);
    CounterRng rng = CounterRng::from_seed(23);
    const SamplePath path = simulate_path(model, scenario, cfg, rng);

    REQUIRE(path.steps() == 200);
    for (std::size_t i = 0; i < path.steps(); ++i) {
        const double x = path.values[i];
        const double drift_term = model.drift(model.true_theta, x) * path.dt;
        const double qv_term = model.qv_drift(x) * path.scenario.per_step_var[i] * path.dt;
        const double expected = ((x + drift_term) + qv_term) + path.increments_b[i];
        CHECK(path.values[i + 1] == expected);  // bitwise, not approximate
    }
}

TEST_CASE("same stream reproduces the same path") {
    const auto model = ou_model();
    GridConfig cfg{50, 0.01, 2, 1, 0};
    auto scenario = ScenarioPath::constant(0.6, 50, 0.5);
    CounterRng a = CounterRng::from_seed(77);
    CounterRng b = CounterRng::from_seed(77);
    const SamplePath pa = simulate_path(model, scenario, cfg, a);
    const SamplePath pb = simulate_path(model, scenario, cfg, b);
    CHECK(pa.values == pb.values);
    CHECK(pa.increments_b == pb.increments_b);
}

TEST_CASE("scenario and grid length mismatch is rejected") {
    const auto model = ou_model();
    GridConfig cfg{50, 0.01, 2, 1, 0};
    auto scenario = ScenarioPath::constant(0.6, 49, 0.5);
    CounterRng rng = CounterRng::from_seed(1);
    CHECK_THROWS_AS(simulate_path(model, scenario, cfg, rng), UsageError);
}

TEST_CASE("unstable drift trips the divergence guard with a step index") {
    // a(theta0, x) = +80 x doubles-and-more each dt = 0.1 step.
    const auto model = ModelSpec::ornstein_uhlenbeck(-80.0, 0.1, 5.0,
                                                     GNormalSpec{0.0, {0.4, 0.6}});
    GridConfig cfg{400, 0.1, 2, 1, 0};
    auto scenario = ScenarioPath::constant(0.5, 400, 0.5);
    CounterRng rng = CounterRng::from_seed(4);
    try {
        simulate_path(model, scenario, cfg, rng);
        FAIL("expected SimulationDiverged");
    } catch (const SimulationDiverged& e) {
        CHECK(e.step() > 0);
        CHECK(e.step() <= 400);
        CHECK(std::string(e.what()).find("diverged") != std::string::npos);
    }
}

TEST_CASE("degenerate interval reduces to the classical scheme") {
    // Hand-rolled five-step Euler recursion with both coefficient terms.
    ModelSpec model;
    model.drift = [](double theta, double x) { return -0.5 * theta * x; };
    model.qv_drift = [](double x) { return 0.2 * x + 0.1; };
    model.true_theta = 1.0;
    model.theta_min = 0.1;
    model.theta_max = 5.0;
    model.initial_law = GNormalSpec{0.0, {0.5, 0.5}};

    GridConfig cfg{5, 0.2, 1, 1, 0};
    auto scenario = ScenarioPath::constant(0.5, 5, 0.5);
    CounterRng rng = CounterRng::from_seed(55);
    const SamplePath path = simulate_path(model, scenario, cfg, rng);

    CounterRng replay = CounterRng::from_seed(55);
    double x = std::sqrt(0.5) * replay.normal();
    CHECK(path.values[0] == x);
    for (int i = 0; i < 5; ++i) {
        const double db = std::sqrt(0.5 * 0.2) * replay.normal();
        CHECK(path.increments_b[static_cast<std::size_t>(i)] == db);
        x = ((x + (-0.5 * 1.0 * x) * 0.2) + ((0.2 * x + 0.1) * 0.5) * 0.2) + db;
        CHECK(path.values[static_cast<std::size_t>(i) + 1] == x);
    }
}

TEST_CASE("long-run variance matches the stationary value") {
    // Linear pull with theta0 = 1, variance 1: stationary variance 1/2.
    const auto model = ModelSpec::ornstein_uhlenbeck(1.0, 0.1, 5.0,
                                                     GNormalSpec{0.0, {0.5, 0.5}});
    auto time_avg_x2 = [&](double dt, std::int64_t n, std::uint64_t seed) {
        GridConfig cfg{n, dt, 1, 1, seed};
        auto scenario = ScenarioPath::constant(1.0, static_cast<std::size_t>(n), 0.5);
        CounterRng rng = CounterRng::from_seed(seed);
        const SamplePath path = simulate_path(model, scenario, cfg, rng);
        double acc = 0.0;
        for (std::size_t i = 0; i < path.steps(); ++i) {
            acc += path.values[i] * path.values[i];
        }
        return acc / static_cast<double>(path.steps());
    };
    // Coarse grid vs a finer-step oracle over the same horizon T = 2000.
    const double coarse = time_avg_x2(0.01, 200000, 101);
    const double fine = time_avg_x2(0.002, 1000000, 102);
    CHECK(std::abs(coarse - 0.5) < 0.035);
    CHECK(std::abs(fine - 0.5) < 0.035);
    CHECK(std::abs(coarse - fine) < 0.05);
}

TEST_CASE("assumption probe reports the linear model's constants") {
    const auto model = ou_model();
    std::vector<AssumptionProbe> probes;
    for (double theta : {0.5, 1.0, 2.0}) {
        for (double x = -10.0; x <= 10.0; x += 2.5) {
            probes.push_back({theta, x});
        }
    }
    const AssumptionReport report = validate_assumptions(model, probes);
    CHECK(report.max_drift_lipschitz == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report.max_qv_lipschitz == 0.0);
    CHECK(report.max_qv_growth == 0.0);
    CHECK(report.max_drift_growth == doctest::Approx(400.0 / 101.0).epsilon(1e-12));
    CHECK_FALSE(report.flagged);
}

TEST_CASE("assumption probe flags super-linear growth") {
    ModelSpec model;
    model.drift = [](double theta, double x) { return theta * x * x; };
    model.qv_drift = [](double) { return 0.0; };
    model.true_theta = 1.0;
    model.theta_min = 0.1;
    model.theta_max = 5.0;
    model.initial_law = GNormalSpec{0.0, {0.4, 0.6}};

    std::vector<AssumptionProbe> probes;
    for (double x = -200.0; x <= 200.0; x += 40.0) {
        probes.push_back({1.0, x});
    }
    const AssumptionReport report = validate_assumptions(model, probes, {100.0, 1000.0});
    CHECK(report.max_drift_lipschitz > 100.0);
    CHECK(report.max_drift_growth > 1000.0);
    CHECK(report.flagged);
}

TEST_CASE("assumption probe needs probes") {
    const auto model = ou_model();
    CHECK_THROWS_AS(validate_assumptions(model, {}), UsageError);
}
