#include <cmath>

#include "doctest.h"
#include "szilard/engine.hpp"
#include "szilard/oracle.hpp"

using namespace szilard;

namespace {
constexpr double kLn2 = 0.6931471805599453;

EngineConfig make_config(Statistics stat, int n, double lambda, double temperature) {
    EngineConfig config;
    config.stat = stat;
    config.n_particles = n;
    config.lambda = lambda;
    config.temperature = temperature;
    return config;
}
}  // namespace

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(run_cycle(make_config(Statistics::Boson, -1, 0.5, 1.0),
                              MeasurementScheme::count()),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_cycle(make_config(Statistics::Boson, 1, 0.0, 1.0),
                              MeasurementScheme::count()),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_cycle(make_config(Statistics::Boson, 1, 1.0, 1.0),
                              MeasurementScheme::count()),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_cycle(make_config(Statistics::Boson, 1, 0.5, 0.0),
                              MeasurementScheme::count()),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_cycle(make_config(Statistics::Boson, 2, 0.5, 1.0),
                              MeasurementScheme::resolved()),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_cycle(make_config(Statistics::Distinguishable, 21, 0.5, 1.0),
                              MeasurementScheme::resolved()),
                    std::invalid_argument);
}

TEST_CASE("coarse scheme validation") {
    const EngineConfig config = make_config(Statistics::Boson, 2, 0.5, 1.0);
    // sector 2 missing
    CHECK_THROWS_AS(run_cycle(config, MeasurementScheme::coarse({{0}, {1}})),
                    std::invalid_argument);
    // sector 1 duplicated
    CHECK_THROWS_AS(run_cycle(config, MeasurementScheme::coarse({{0, 1}, {1, 2}})),
                    std::invalid_argument);
    // sector out of range
    CHECK_THROWS_AS(run_cycle(config, MeasurementScheme::coarse({{0, 1, 2, 3}})),
                    std::invalid_argument);
    CHECK_NOTHROW(run_cycle(config, MeasurementScheme::coarse({{2, 0}, {1}})));
}

TEST_CASE("trivial measurement closes at exactly zero") {
    for (const EngineConfig& config :
         {make_config(Statistics::Boson, 3, 0.5, 0.8),
          make_config(Statistics::Fermion, 2, 0.34, 0.37),
          make_config(Statistics::Distinguishable, 4, 0.61, 2.5)}) {
        const CycleResult result = run_cycle(config, MeasurementScheme::trivial());
        REQUIRE(result.ledger.w2.size() == 1);
        CHECK(result.ledger.w1 + result.ledger.w2[0] == 0.0);
        CHECK(result.ledger.net_work == 0.0);
        CHECK(result.ledger.entropy == 0.0);
        CHECK(result.ledger.net_with_erasure == 0.0);
        CHECK(result.distribution.outcomes[0].probability == 1.0);
        CHECK(result.distribution.outcomes[0].label == "all");
    }
}

TEST_CASE("one boson at a symmetric barrier, deep in the ground state") {
    // Insertion pays the ground-energy jump 1 -> 4 minus the kT ln 2 mixing
    // gain; each extraction recovers exactly the jump.
    const EngineConfig config = make_config(Statistics::Boson, 1, 0.5, 0.01);
    const CycleResult result = run_cycle(config, MeasurementScheme::count());
    CHECK(result.ledger.w1 ==
          doctest::Approx(0.01 * kLn2 - 3.0).epsilon(1e-12));
    REQUIRE(result.ledger.w2.size() == 2);
    CHECK(result.ledger.w2[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(result.ledger.w2[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(result.ledger.net_work == doctest::Approx(0.01 * kLn2).epsilon(1e-9));
    CHECK(result.distribution.outcomes[0].probability ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("three bosons, counted: net work is kT ln 4") {
    const EngineConfig config = make_config(Statistics::Boson, 3, 0.5, 0.01);
    const CycleResult result = run_cycle(config, MeasurementScheme::count());
    REQUIRE(result.distribution.outcomes.size() == 4);
    for (const Outcome& out : result.distribution.outcomes)
        CHECK(out.probability == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(result.ledger.net_work ==
          doctest::Approx(0.01 * std::log(4.0)).epsilon(1e-10));
    CHECK(std::abs(result.ledger.net_with_erasure) < 1e-14);
}

TEST_CASE("distinguishable particles, fully resolved at a symmetric barrier") {
    // With identical half-boxes every one of the 2^N outcomes has the same
    // weight, so the information is N ln 2 at ANY temperature.
    for (double temperature : {0.01, 0.7}) {
        const EngineConfig config =
            make_config(Statistics::Distinguishable, 3, 0.5, temperature);
        const CycleResult result = run_cycle(config, MeasurementScheme::resolved());
        REQUIRE(result.distribution.outcomes.size() == 8);
        CHECK(result.distribution.outcomes[0].label == "RRR");
        CHECK(result.distribution.outcomes[5].label == "LRL");
        for (const Outcome& out : result.distribution.outcomes)
            CHECK(out.probability == doctest::Approx(0.125).epsilon(1e-13));
        CHECK(result.ledger.entropy ==
              doctest::Approx(3 * kLn2).epsilon(1e-14));
        CHECK(result.ledger.net_work ==
              doctest::Approx(temperature * 3 * kLn2).epsilon(1e-13));
    }
}

TEST_CASE("two fermions at lambda = 0.4: deterministic split, W1 pinned") {
    // Ground filling: right mode 1 (2.77778) + left mode 1 (6.25) = 9.02778
    // against the full-box 1 + 4 = 5, so W1 -> 5 - 9.02778 = -4.02778 and the
    // count measurement learns nothing.
    const EngineConfig config = make_config(Statistics::Fermion, 2, 0.4, 0.005);
    const CycleResult result = run_cycle(config, MeasurementScheme::count());
    CHECK(result.ledger.w1 ==
          doctest::Approx(5.0 - 9.027777777777779).epsilon(1e-10));
    // probability concentrates on n_left = 1
    REQUIRE(result.distribution.outcomes.size() == 3);
    CHECK(result.distribution.outcomes[1].probability ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.ledger.entropy < 1e-12);
    CHECK(std::abs(result.ledger.net_work) < 1e-12);
}

TEST_CASE("ledger fields are mutually consistent") {
    const EngineConfig config = make_config(Statistics::Boson, 4, 0.3, 0.6);
    const CycleResult result = run_cycle(config, MeasurementScheme::count());
    const WorkLedger& ledger = result.ledger;
    const double scale =
        std::max({config.temperature, std::abs(ledger.w1), std::abs(ledger.net_work)});
    CHECK(std::abs(ledger.w1 + ledger.expected_w2 - ledger.net_work) < 1e-12 * scale);
    CHECK(ledger.erasure_cost ==
          doctest::Approx(config.temperature * ledger.entropy).epsilon(1e-14));
    CHECK(information_gain(result.distribution) ==
          doctest::Approx(ledger.entropy).epsilon(1e-12));
    double total_p = 0.0;
    for (const Outcome& out : result.distribution.outcomes) total_p += out.probability;
    CHECK(total_p == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("measurement probabilities match the enumeration oracle") {
    for (Statistics stat : {Statistics::Boson, Statistics::Fermion,
                            Statistics::Distinguishable}) {
        EngineConfig config = make_config(stat, 3, 0.35, 0.8);
        const OutcomeDistribution dist = measure(config, MeasurementScheme::count());
        const auto rows = oracle::enumerate_sector_probabilities(
            split_box(0.35, config.levels > 0 ? config.levels : 40), stat, 3,
            1.0 / 0.8);
        REQUIRE(dist.outcomes.size() == 4);
        for (std::size_t i = 0; i < dist.outcomes.size(); ++i)
            CHECK(dist.outcomes[i].probability ==
                  doctest::Approx(rows[i].probability).epsilon(1e-10));
    }
}

TEST_CASE("resolved outcomes aggregate to the count distribution") {
    const EngineConfig config = make_config(Statistics::Distinguishable, 4, 0.28, 0.9);
    const OutcomeDistribution resolved = measure(config, MeasurementScheme::resolved());
    const OutcomeDistribution counted = measure(config, MeasurementScheme::count());
    std::vector<double> by_count(5, 0.0);
    for (const Outcome& out : resolved.outcomes) {
        REQUIRE(out.sectors.size() == 1);
        by_count[static_cast<std::size_t>(out.sectors[0])] += out.probability;
    }
    for (int n = 0; n <= 4; ++n)
        CHECK(by_count[static_cast<std::size_t>(n)] ==
              doctest::Approx(counted.outcomes[static_cast<std::size_t>(n)].probability)
                  .epsilon(1e-12));
}

TEST_CASE("count distribution is symmetric at the midpoint") {
    const EngineConfig config = make_config(Statistics::Boson, 4, 0.5, 0.3);
    const OutcomeDistribution dist = measure(config, MeasurementScheme::count());
    for (int n = 0; n <= 4; ++n)
        CHECK(dist.outcomes[static_cast<std::size_t>(n)].probability ==
              doctest::Approx(dist.outcomes[static_cast<std::size_t>(4 - n)].probability)
                  .epsilon(1e-13));
}

TEST_CASE("coarse grouping merges probabilities and loses information") {
    const EngineConfig config = make_config(Statistics::Boson, 3, 0.5, 0.2);
    const OutcomeDistribution counted = measure(config, MeasurementScheme::count());
    const CycleResult grouped =
        run_cycle(config, MeasurementScheme::coarse({{2, 0}, {1, 3}}));
    REQUIRE(grouped.distribution.outcomes.size() == 2);
    CHECK(grouped.distribution.outcomes[0].label == "0,2");
    CHECK(grouped.distribution.outcomes[1].label == "1,3");
    CHECK(grouped.distribution.outcomes[0].probability ==
          doctest::Approx(counted.outcomes[0].probability +
                          counted.outcomes[2].probability)
              .epsilon(1e-12));

    const CycleResult full = run_cycle(config, MeasurementScheme::count());
    CHECK(grouped.ledger.net_work < full.ledger.net_work);

    const CycleResult ranged =
        run_cycle(config, MeasurementScheme::coarse({{0, 1, 2}, {3}}));
    CHECK(ranged.distribution.outcomes[0].label == "0-2");
}

TEST_CASE("truncation order does not leak into the ledger") {
    EngineConfig automatic = make_config(Statistics::Boson, 2, 0.45, 0.5);
    EngineConfig pinned = automatic;
    pinned.levels = 40;
    const CycleResult a = run_cycle(automatic, MeasurementScheme::count());
    const CycleResult b = run_cycle(pinned, MeasurementScheme::count());
    CHECK(a.ledger.net_work == doctest::Approx(b.ledger.net_work).epsilon(1e-12));
    CHECK(a.ledger.w1 == doctest::Approx(b.ledger.w1).epsilon(1e-12));
}

TEST_CASE("a custom reference spectrum reproduces the built-in box") {
    EngineConfig boxed = make_config(Statistics::Boson, 2, 0.5, 0.8);
    boxed.levels = 30;
    EngineConfig custom = boxed;
    std::vector<Level> levels;
    for (int n = 1; n <= 30; ++n) levels.push_back({double(n) * n, 1});
    custom.base_spectrum = make_spectrum(levels);
    const CycleResult a = run_cycle(boxed, MeasurementScheme::count());
    const CycleResult b = run_cycle(custom, MeasurementScheme::count());
    CHECK(a.ledger.w1 == doctest::Approx(b.ledger.w1).epsilon(1e-13));
    CHECK(a.ledger.net_work == doctest::Approx(b.ledger.net_work).epsilon(1e-13));
}

TEST_CASE("a spectrum too short to certify its tail is rejected") {
    EngineConfig config = make_config(Statistics::Boson, 1, 0.5, 1.0);
    config.base_spectrum = make_spectrum({{1.0, 1}, {4.0, 1}});
    CHECK_THROWS_AS(run_cycle(config, MeasurementScheme::count()),
                    insufficient_levels_error);
}

TEST_CASE("extraction work for a zero-probability outcome is rejected") {
    const EngineConfig config = make_config(Statistics::Boson, 1, 0.5, 1.0);
    Outcome ghost;
    ghost.label = "ghost";
    ghost.probability = 0.0;
    CHECK_THROWS_AS(extraction_work(config, ghost), std::invalid_argument);
}

TEST_CASE("equilibrium position: symmetric outcome sits at the midpoint") {
    const EngineConfig config = make_config(Statistics::Boson, 2, 0.5, 0.05);
    const OutcomeDistribution dist = measure(config, MeasurementScheme::count());
    const EquilibriumPosition eq = equilibrium_position(config, dist.outcomes[1]);
    CHECK(std::abs(eq.lambda_star - 0.5) < 2e-6);
    CHECK_FALSE(eq.at_boundary);
}

TEST_CASE("equilibrium position: 2-vs-1 bosons favor the fatter left box") {
    // Minimizing 2/l^2 + 1/(1-l)^2 gives lambda = 1/(1 + 2^(-1/3)) ~ 0.5575,
    // with a small thermal correction at T = 0.01.
    const EngineConfig config = make_config(Statistics::Boson, 3, 0.5, 0.01);
    const OutcomeDistribution dist = measure(config, MeasurementScheme::count());
    const EquilibriumPosition eq = equilibrium_position(config, dist.outcomes[2]);
    CHECK(eq.lambda_star == doctest::Approx(0.5575062919349601).epsilon(1e-4));
    CHECK_FALSE(eq.at_boundary);
    // and it is a genuine local minimum of the profile
    const auto probe = free_energy_profile(
        config, dist.outcomes[2],
        {eq.lambda_star - 1e-3, eq.lambda_star, eq.lambda_star + 1e-3});
    CHECK(probe[1].free_energy <= probe[0].free_energy);
    CHECK(probe[1].free_energy <= probe[2].free_energy);
}

TEST_CASE("equilibrium position: one-sided outcomes run to the wall") {
    const EngineConfig config = make_config(Statistics::Distinguishable, 1, 0.5, 0.05);
    const OutcomeDistribution dist = measure(config, MeasurementScheme::count());
    const EquilibriumPosition right = equilibrium_position(config, dist.outcomes[1]);
    CHECK(right.at_boundary);
    CHECK(right.lambda_star == doctest::Approx(0.9999));
    const EquilibriumPosition left = equilibrium_position(config, dist.outcomes[0]);
    CHECK(left.at_boundary);
    CHECK(left.lambda_star == doctest::Approx(0.0001));
}

TEST_CASE("force profile is antisymmetric for a symmetric outcome") {
    const EngineConfig config = make_config(Statistics::Boson, 2, 0.5, 0.05);
    const OutcomeDistribution dist = measure(config, MeasurementScheme::count());
    const auto points =
        free_energy_profile(config, dist.outcomes[1], {0.3, 0.5, 0.7});
    REQUIRE(points.size() == 3);
    CHECK(points[0].force == doctest::Approx(-points[2].force).epsilon(1e-6));
    CHECK(std::abs(points[1].force) < 1e-6 * std::abs(points[1].free_energy));
    for (const auto& point : points) CHECK(point.feasible);
}

TEST_CASE("profile rejects lambda outside the open interval") {
    const EngineConfig config = make_config(Statistics::Boson, 1, 0.5, 0.5);
    const OutcomeDistribution dist = measure(config, MeasurementScheme::count());
    CHECK_THROWS_AS(free_energy_profile(config, dist.outcomes[0], {0.0}),
                    std::invalid_argument);
}

TEST_CASE("insertion and extraction compose into the cycle") {
    const EngineConfig config = make_config(Statistics::Fermion, 3, 0.45, 0.7);
    const CycleResult result = run_cycle(config, MeasurementScheme::count());
    CHECK(insertion_work(config) == doctest::Approx(result.ledger.w1).epsilon(1e-13));
    const Outcome& out = result.distribution.outcomes[1];
    CHECK(extraction_work(config, out) ==
          doctest::Approx(result.ledger.w2[1]).epsilon(1e-10));
}

TEST_CASE("zero particles: every scheme is a null cycle") {
    const EngineConfig config = make_config(Statistics::Boson, 0, 0.4, 1.0);
    const CycleResult result = run_cycle(config, MeasurementScheme::count());
    CHECK(result.ledger.w1 == 0.0);
    CHECK(result.ledger.net_work == 0.0);
    REQUIRE(result.distribution.outcomes.size() == 1);
    CHECK(result.distribution.outcomes[0].label == "n=0");
}
