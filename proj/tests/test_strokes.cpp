#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mcqhe/strokes.hpp"
#include "oracles.hpp"

using namespace mcqhe;
using namespace mcqhe::testing;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gamma_max endpoints and interior value") {
    CHECK(gamma_max(0.0, 0.8) == 1.0);
    CHECK(gamma_max(1.0, 0.8) == 0.0);
    CHECK(gamma_max(0.5, 0.8) == doctest::Approx(std::sqrt(0.6 * 0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_max(-0.1, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(gamma_max(1.1, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(gamma_max(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_max(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("extremal thermal stroke from the ground state lands at E' = a") {
    const BathParams bath(0.2, 1.0);
    const ControlMarginalState ground = make_state(0.0, 0.0, 1.0);
    const StrokeOutcome out = thermal_stroke(ground, bath, {1.0, 0.0});
    const double a = std::exp(-0.2);
    CHECK(out.state_after.energy() == doctest::Approx(a).epsilon(1e-14));
    CHECK(out.energy_flow == doctest::Approx(a).epsilon(1e-14));
    CHECK(out.energy_flow == doctest::Approx(0.818731).epsilon(1e-6));
}

TEST_CASE("the Gibbs state is invariant under every thermal stroke") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const BathParams bath = random_bath(rng);
        const ControlMarginalState gibbs = gibbs_state(bath);
        const double lambda = unit(rng);
        const StrokeOutcome out =
            thermal_stroke(gibbs, bath, {lambda, unit(rng) * gamma_max(lambda, bath.boltzmann())});
        CHECK(std::fabs(out.energy_flow) <= 1e-14);
        CHECK(std::fabs(out.state_after.energy() - gibbs.energy()) <= 1e-14);
    }
}

TEST_CASE("lambda = 0 with gamma = 1 is the identity channel") {
    const BathParams bath(0.7, 1.0);
    const ControlMarginalState s = make_state(0.3, 0.2, 1.0);
    const StrokeOutcome out = thermal_stroke(s, bath, {0.0, 1.0});
    CHECK(out.state_after.energy() == s.energy());
    CHECK(out.state_after.coherence() == s.coherence());
    CHECK(out.energy_flow == 0.0);
}

TEST_CASE("gamma above the admissible bound is rejected, tolerance 1e-12") {
    const BathParams bath(0.2, 1.0);
    const ControlMarginalState s = make_state(0.3, 0.2, 1.0);
    const double bound = gamma_max(0.5, bath.boltzmann());
    CHECK_NOTHROW(thermal_stroke(s, bath, {0.5, bound + 5e-13}));
    CHECK(throws_with<std::invalid_argument>(
        [&] { thermal_stroke(s, bath, {0.5, bound + 1e-9}); }, "exceeds"));
}

TEST_CASE("work stroke at theta = 0 does nothing") {
    const ControlMarginalState s = make_state(0.4, 0.3, 1.0);
    const StrokeOutcome out = work_stroke(s, {0.0});
    CHECK(out.energy_flow == 0.0);
    CHECK(out.state_after.energy() == s.energy());
}

TEST_CASE("rotating (alpha, z) = (0.6, 0) onto (0, -0.6) stores W = 0.3") {
    const ControlMarginalState s = make_state(0.5, 0.6, 1.0);
    const StrokeOutcome out = work_stroke(s, {-kPi / 2.0});
    CHECK(out.state_after.z() == doctest::Approx(-0.6).epsilon(1e-14));
    CHECK(out.state_after.coherence() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(out.energy_flow == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(out.energy_flow == doctest::Approx(ergotropy(s)).epsilon(1e-13));
}

TEST_CASE("angles outside [-pi, pi] are rejected") {
    const ControlMarginalState s = make_state(0.4, 0.3, 1.0);
    CHECK_THROWS_AS(work_stroke(s, {3.5}), std::invalid_argument);
    CHECK_THROWS_AS(work_stroke(s, {-3.5}), std::invalid_argument);
}

TEST_CASE("work strokes preserve r and entropy and never beat the ergotropy") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int i = 0; i < 10000; ++i) {
        const ControlMarginalState s = random_state(rng);
        const StrokeOutcome out = work_stroke(s, {angle(rng)});
        CHECK(std::fabs(out.state_after.r() - s.r()) <= 1e-12);
        CHECK(std::fabs(entropy(out.state_after) - entropy(s)) <= 1e-12);
        CHECK(out.energy_flow <= ergotropy(s) + 1e-12);
    }
}

TEST_CASE("maximal ergotropy storing") {
    SUBCASE("a passive diagonal state stays put") {
        const ControlMarginalState s = make_state(0.2, 0.0, 1.0);
        const StrokeOutcome out = max_ergotropy_storing(s);
        CHECK(out.energy_flow == 0.0);
        CHECK(out.state_after.energy() == s.energy());
    }
    SUBCASE("the fully excited state drops to the ground state, W = omega") {
        const StrokeOutcome out = max_ergotropy_storing(make_state(1.0, 0.0, 2.5));
        CHECK(out.energy_flow == 2.5);
        CHECK(out.state_after.energy() == 0.0);
    }
    SUBCASE("inverted diagonal state: W = 2E - omega") {
        const StrokeOutcome out = max_ergotropy_storing(make_state(0.598540, 0.0, 1.0));
        CHECK(out.energy_flow == doctest::Approx(0.197080).epsilon(1e-9));
        CHECK(out.state_after.energy() == doctest::Approx(0.401460).epsilon(1e-9));
    }
    SUBCASE("always lands diagonal at z = -r with W = R_S") {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 10000; ++i) {
            const ControlMarginalState s = random_state(rng);
            const StrokeOutcome out = max_ergotropy_storing(s);
            CHECK(out.state_after.coherence() == 0.0);
            CHECK(out.state_after.z() == doctest::Approx(-s.r()).epsilon(1e-14));
            CHECK(out.energy_flow == doctest::Approx(ergotropy(s)).scale(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("largest single-stroke ergotropy gain") {
    const BathParams bath(0.2, 1.0);
    SUBCASE("spot value at the optimal-cycle starting energy") {
        const double e0 = std::exp(-1.0) / (1.0 + std::exp(-1.0));
        const double gain = delta_r_max(make_state(e0, 0.0, 1.0), bath);
        CHECK(gain == doctest::Approx(2.0 * (1.0 - e0) * std::exp(-0.2) - 1.0).epsilon(1e-14));
        CHECK(std::fabs(gain - 0.197079) < 1e-5);
    }
    SUBCASE("zero beyond the positivity threshold for diagonal states") {
        const double threshold = 1.0 - 0.5 * std::exp(0.2);
        for (double e = threshold; e <= 1.0; e += 0.01) {
            CHECK(delta_r_max(make_state(e, 0.0, 1.0), bath) == 0.0);
        }
    }
    SUBCASE("ground state gains 2a - 1") {
        CHECK(delta_r_max(make_state(0.0, 0.0, 1.0), bath) ==
              doctest::Approx(2.0 * std::exp(-0.2) - 1.0).epsilon(1e-14));
        CHECK(delta_r_max(make_state(0.0, 0.0, 1.0), bath) ==
              doctest::Approx(0.637462).epsilon(1e-6));
    }
}

TEST_CASE("grid search over (lambda, gamma) never beats the single-stroke bound") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        const ControlMarginalState s = random_state(rng);
        const BathParams bath = random_bath(rng);
        const double bound = delta_r_max(s, bath);
        const GridMax found = grid_delta_r(s, bath);
        CHECK(found.gain <= bound + 1e-6);
        if (bound > 1e-9) {
            CHECK(found.lambda >= 1.0 - 1e-2);
            CHECK(found.gain == doctest::Approx(bound).epsilon(1e-6));
        }
    }
}

TEST_CASE("extraction thresholds: coherent state") {
    // z = -0.9, alpha = 0.3 -> B = 0.09/0.19
    const ExtractionThresholds th = extraction_thresholds(0.8, -0.9, 0.09 / 0.19);
    REQUIRE(th.lambda0_numeric.has_value());
    REQUIRE(th.lambda0_closed.has_value());
    CHECK(*th.lambda0_closed == doctest::Approx(*th.lambda0_numeric).epsilon(1e-9));
    CHECK(th.lambda0_match);
    CHECK(std::fabs(*th.lambda0_closed - 0.3297) < 1e-4);
    // The gain really does change sign at the root.
    const BathParams bath(-std::log(0.8), 1.0);
    const ControlMarginalState s = make_state(0.05, 0.3, 1.0);
    CHECK(ergotropy_gain(s, bath, *th.lambda0_numeric - 1e-6,
                         gamma_max(*th.lambda0_numeric - 1e-6, 0.8)) < 0.0);
    CHECK(ergotropy_gain(s, bath, *th.lambda0_numeric + 1e-6,
                         gamma_max(*th.lambda0_numeric + 1e-6, 0.8)) > 0.0);
}

TEST_CASE("extraction thresholds: diagonal state") {
    const ExtractionThresholds th = extraction_thresholds(0.8, -0.9, 0.0);
    REQUIRE(th.lambda0_numeric.has_value());
    CHECK(*th.lambda0_closed == doctest::Approx(0.9 / 1.42).epsilon(1e-12));
    CHECK(*th.lambda0_closed == doctest::Approx(0.633803).epsilon(1e-6));
    CHECK(*th.lambda0_numeric == doctest::Approx(*th.lambda0_closed).epsilon(1e-9));
    CHECK(th.lambda0_match);
}

TEST_CASE("extraction thresholds: Gibbs state has none") {
    const double a = 0.8;
    const double z_gibbs = -(1.0 - a) / (1.0 + a);
    const ExtractionThresholds th = extraction_thresholds(a, z_gibbs, 0.0);
    CHECK_FALSE(th.lambda0_numeric.has_value());
}

TEST_CASE("z0: numeric root disagrees with the closed form at B = 0 and is authoritative") {
    const double a = 0.8;
    const ExtractionThresholds th = extraction_thresholds(a, -0.9, 0.0);
    REQUIRE(th.z0_numeric.has_value());
    // The diagonal threshold is z0 = -(1-a)/a; z_plus agrees with it at B = 0.
    CHECK(*th.z0_numeric == doctest::Approx(-(1.0 - a) / a).epsilon(1e-9));
    CHECK(th.z_plus == doctest::Approx(-(1.0 - a) / a).epsilon(1e-12));
    // The closed form simplifies to -(1-a)(2a-1)/(2a(1+a)) instead; flagged.
    CHECK(th.z0_closed == doctest::Approx(-(1.0 - a) * (2.0 * a - 1.0) /
                                          (2.0 * a * (1.0 + a))).epsilon(1e-12));
    CHECK_FALSE(th.z0_match);
}

TEST_CASE("convexity window of the ergotropy gain (logged, not assumed)") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> a_range(0.55, 0.99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    int mismatches = 0;
    for (int i = 0; i < 300; ++i) {
        const double a = a_range(rng);
        const double B = unit(rng);
        const ExtractionThresholds th = extraction_thresholds(a, -0.5, B);
        const BathParams bath(-std::log(a), 1.0);
        std::uniform_real_distribution<double> z_range(-0.999, std::min(th.z_plus, 0.0));
        const double z = z_range(rng);
        const ControlMarginalState s =
            make_state(0.5 * (1.0 + z), std::sqrt(B * (1.0 - z * z)), 1.0);
        for (double lambda = 0.1; lambda <= 0.9; lambda += 0.2) {
            const double h = 1e-4;
            const double second = (ergotropy_gain(s, bath, lambda + h, gamma_max(lambda + h, a)) -
                                   2.0 * ergotropy_gain(s, bath, lambda, gamma_max(lambda, a)) +
                                   ergotropy_gain(s, bath, lambda - h, gamma_max(lambda - h, a))) /
                                  (h * h);
            ++checked;
            if (second < -1e-4) {
                ++mismatches;
            }
        }
    }
    CHECK(checked > 0);
    WARN_MESSAGE(mismatches == 0, "convexity claim mismatched on ", mismatches, " of ", checked,
                 " samples below z_plus");
}

TEST_CASE("Clausius holds on every sampled thermal stroke") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 20000; ++i) {
        const ControlMarginalState s = random_state(rng);
        const BathParams bath = random_bath(rng);
        const double lambda = unit(rng);
        const StrokeOutcome out = thermal_stroke(
            s, bath, {lambda, unit(rng) * gamma_max(lambda, bath.boltzmann())});
        const double ds = entropy(out.state_after) - entropy(s);
        if (ds < bath.beta * out.energy_flow - 1e-12) {
            ++violations;
        }
        // Valid in, valid out, and the coherence only ever shrinks.
        if (out.state_after.coherence() > s.coherence() || out.state_after.r() > 1.0) {
            ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("ergotropy gain forces passive-energy gain and free-energy loss") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 20000; ++i) {
        const ControlMarginalState s = random_state(rng);
        const BathParams bath = random_bath(rng);
        const double lambda = unit(rng);
        const StrokeOutcome out = thermal_stroke(
            s, bath, {lambda, unit(rng) * gamma_max(lambda, bath.boltzmann())});
        if (ergotropy(out.state_after) - ergotropy(s) > 1e-12) {
            const double dp = passive_energy(out.state_after) - passive_energy(s);
            const double df = free_energy(out.state_after, bath.beta) - free_energy(s, bath.beta);
            if (dp <= -1e-12 || df >= 1e-12) {
                ++violations;
            }
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("positive gain only happens below the erasure gap beta*omega < ln 2") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 20000; ++i) {
        const ControlMarginalState s = random_state(rng);
        const BathParams bath = random_bath(rng);
        const double lambda = unit(rng);
        const StrokeOutcome out = thermal_stroke(
            s, bath, {lambda, unit(rng) * gamma_max(lambda, bath.boltzmann())});
        if (ergotropy(out.state_after) - ergotropy(s) > 1e-12 &&
            bath.beta * bath.gap >= std::log(2.0) + 1e-12) {
            ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("cumulative work against one bath never beats the free-energy drop") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> length(1, 8);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    int violations = 0;
    int strict_cases = 0;
    for (int i = 0; i < 5000; ++i) {
        const BathParams bath = random_bath(rng);
        // Alternate coherent and diagonal passive starts; only the latter
        // can trigger the strict form of the bound.
        const ControlMarginalState initial =
            i % 2 == 0 ? random_state(rng) : make_state(0.5 * unit(rng), 0.0, 1.0);
        ControlMarginalState state = initial;
        double work = 0.0;
        const int steps = length(rng);
        for (int k = 0; k < steps; ++k) {
            const double lambda = unit(rng);
            state = thermal_stroke(state, bath,
                                   {lambda, unit(rng) * gamma_max(lambda, bath.boltzmann())})
                        .state_after;
            const StrokeOutcome stored = work_stroke(state, {angle(rng)});
            work += stored.energy_flow;
            state = stored.state_after;
        }
        const double df = free_energy(state, bath.beta) - free_energy(initial, bath.beta);
        if (work > -df + 1e-12) {
            ++violations;
        }
        if (ergotropy(initial) == 0.0 && df < -1e-9) {
            ++strict_cases;
            if (work >= -df) {
                ++violations;
            }
        }
    }
    CHECK(violations == 0);
    CHECK(strict_cases > 0);
}
