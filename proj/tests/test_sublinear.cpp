#include <doctest.h>

#include <cmath>
#include <vector>

#include "gsde/errors.hpp"
#include "gsde/rng.hpp"
#include "gsde/sublinear.hpp"

using namespace gsde;

namespace {
const VarianceInterval kHalfToOne{0.5, 1.0};
}

TEST_CASE("variance interval validation") {
    CHECK_THROWS_AS((VarianceInterval{0.0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((VarianceInterval{-0.5, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((VarianceInterval{1.0, 0.5}.validate()), ConfigError);
    CHECK_NOTHROW((VarianceInterval{0.5, 0.5}.validate()));  // degenerate is legal
    CHECK_NOTHROW(kHalfToOne.validate());
}

TEST_CASE("generator values on [0.5, 1]") {
    CHECK(g_function(1.0, kHalfToOne) == 0.5);
    CHECK(g_function(0.0, kHalfToOne) == 0.0);
    CHECK(g_function(-1.0, kHalfToOne) == -0.25);
}

TEST_CASE("generator is positively homogeneous and monotone") {
    const double alphas[] = {-3.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.5};
    const double lambdas[] = {0.0, 0.5, 1.0, 3.0, 10.0};
    for (double a : alphas) {
        for (double l : lambdas) {
            CHECK(g_function(l * a, kHalfToOne) ==
                  doctest::Approx(l * g_function(a, kHalfToOne)).epsilon(1e-14));
        }
    }
    double prev = g_function(alphas[0], kHalfToOne);
    for (double a : alphas) {
        const double cur = g_function(a, kHalfToOne);
        CHECK(cur >= prev);
        prev = cur;
    }
    // Sub-additivity at +/- alpha: the uncertainty premium is nonnegative.
    for (double a : alphas) {
        CHECK(g_function(a, kHalfToOne) + g_function(-a, kHalfToOne) >= 0.0);
    }
}

TEST_CASE("scenario grid is equally spaced in volatility") {
    const ScenarioGrid grid = build_scenario_grid(VarianceInterval{0.25, 1.0}, 3);
    REQUIRE(grid.size() == 3);
    // Volatilities 0.5, 0.75, 1.0.
    CHECK(grid.points[0] == 0.25);
    CHECK(grid.points[1] == doctest::Approx(0.5625).epsilon(1e-15));
    CHECK(grid.points[2] == 1.0);
}

TEST_CASE("scenario grid endpoints are bit-exact and spacing uniform") {
    const int m = 10;
    const ScenarioGrid grid = build_scenario_grid(kHalfToOne, m);
    REQUIRE(grid.size() == m);
    CHECK(grid.points.front() == 0.5);
    CHECK(grid.points.back() == 1.0);
    const double h = (1.0 - std::sqrt(0.5)) / (m - 1);
    for (int i = 0; i < m; ++i) {
        const double s = std::sqrt(0.5) + h * i;
        CHECK(std::sqrt(grid.points[static_cast<std::size_t>(i)]) ==
              doctest::Approx(s).epsilon(1e-13));
    }
    for (int i = 1; i < m; ++i) {
        CHECK(grid.points[static_cast<std::size_t>(i)] >
              grid.points[static_cast<std::size_t>(i - 1)]);
    }
}

TEST_CASE("scenario grid rejects m < 2; scenario_points allows degenerate m = 1") {
    CHECK_THROWS_AS(build_scenario_grid(kHalfToOne, 1), ConfigError);
    CHECK_THROWS_AS(build_scenario_grid(kHalfToOne, 0), ConfigError);
    CHECK_THROWS_AS(scenario_points(kHalfToOne, 1), ConfigError);
    const auto pts = scenario_points(VarianceInterval{0.7, 0.7}, 1);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0] == 0.7);
}

TEST_CASE("degenerate grid holds the single value everywhere") {
    const ScenarioGrid grid = build_scenario_grid(VarianceInterval{0.6, 0.6}, 5);
    for (double v : grid.points) {
        CHECK(v == 0.6);
    }
}

TEST_CASE("g-normal sampling under a fixed scenario") {
    const GNormalSpec spec{0.0, kHalfToOne};
    CounterRng rng = CounterRng::from_seed(99);

    SUBCASE("zero variance is the point-mass limit") {
        CHECK(sample_g_normal(spec, 0.0, rng) == 0.0);
        const GNormalSpec shifted{0.3, kHalfToOne};
        CHECK(sample_g_normal(shifted, 0.0, rng) == 0.3);
    }

    SUBCASE("scenario variance outside the interval is rejected") {
        CHECK_THROWS_AS(sample_g_normal(spec, 0.4, rng), ConfigError);
        CHECK_THROWS_AS(sample_g_normal(spec, 1.2, rng), ConfigError);
    }

    SUBCASE("same stream gives the same draw") {
        CounterRng a = CounterRng::from_seed(5);
        CounterRng b = CounterRng::from_seed(5);
        CHECK(sample_g_normal(spec, 0.75, a) == sample_g_normal(spec, 0.75, b));
    }

    SUBCASE("law matches N(0, scenario_var)") {
        const int n = 1000000;
        const double var = 0.5;
        double s1 = 0.0, s2 = 0.0, s4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sample_g_normal(spec, var, rng);
            s1 += x;
            s2 += x * x;
            s4 += x * x * x * x;
        }
        const double mean = s1 / n;
        const double v = s2 / n - mean * mean;
        CHECK(std::abs(mean) < 0.004);
        CHECK(std::abs(v - var) < 0.01);
        // Fourth moment of a centred normal is 3 var^2.
        CHECK(s4 / n / (3.0 * var * var) == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("envelope over scenario means") {
    const EnvelopeEstimate est = envelope_over_scenarios({1.0, 1.2, 0.9});
    CHECK(est.lower == 0.9);
    CHECK(est.upper == 1.2);
    REQUIRE(est.per_scenario_means.size() == 3);

    const EnvelopeEstimate single = envelope_over_scenarios({1.3});
    CHECK(single.lower == 1.3);
    CHECK(single.upper == 1.3);

    CHECK_THROWS_AS(envelope_over_scenarios({}), UsageError);
}

TEST_CASE("envelope bounds are attained elements") {
    CounterRng rng = CounterRng::from_seed(31);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> means;
        const int m = 1 + static_cast<int>(rng.next_u64() % 12);
        for (int k = 0; k < m; ++k) {
            means.push_back(rng.normal());
        }
        const EnvelopeEstimate est = envelope_over_scenarios(means);
        CHECK(est.lower <= est.upper);
        bool lower_found = false;
        bool upper_found = false;
        for (double v : est.per_scenario_means) {
            lower_found = lower_found || v == est.lower;
            upper_found = upper_found || v == est.upper;
            CHECK(v >= est.lower);
            CHECK(v <= est.upper);
        }
        CHECK(lower_found);
        CHECK(upper_found);
    }
}
