#include <cmath>
#include <sstream>

#include "doctest.h"
#include "szilard/spectrum.hpp"

using namespace szilard;

TEST_CASE("box spectrum energies and exact dyadic scaling") {
    const Spectrum unit = box_spectrum(1.0, 5);
    REQUIRE(unit.size() == 5);
    CHECK(unit.levels[0].energy == 1.0);
    CHECK(unit.levels[3].energy == 16.0);
    CHECK(unit.total_modes() == 5);

    // width 1/2 multiplies every energy by exactly 4 (a power of two), so the
    // halves of a symmetric split are bit-identical level by level.
    const SplitSpectrum split = split_box(0.5, 7);
    REQUIRE(split.left.size() == split.right.size());
    for (int i = 0; i < split.left.size(); ++i) {
        CHECK(split.left.levels[i].energy == split.right.levels[i].energy);
        CHECK(split.left.levels[i].energy == 4.0 * unit.levels[0].energy *
                                                 double((i + 1) * (i + 1)));
    }
}

TEST_CASE("mirrored splits swap sides with identical energies") {
    const SplitSpectrum a = split_box(0.375, 6);  // dyadic lambda: exact mirror
    const SplitSpectrum b = split_box(0.625, 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(a.left.levels[i].energy == b.right.levels[i].energy);
        CHECK(a.right.levels[i].energy == b.left.levels[i].energy);
    }
}

TEST_CASE("make_spectrum sorts and merges degenerate levels") {
    const Spectrum s = make_spectrum({{4.0, 1}, {1.0, 2}, {4.0 + 1e-15, 3}});
    REQUIRE(s.size() == 2);
    CHECK(s.levels[0].energy == 1.0);
    CHECK(s.levels[0].degeneracy == 2);
    CHECK(s.levels[1].degeneracy == 4);
    CHECK(s.total_modes() == 6);
}

TEST_CASE("make_spectrum rejects junk") {
    CHECK_THROWS_AS(make_spectrum({}), std::invalid_argument);
    CHECK_THROWS_AS(make_spectrum({{1.0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_spectrum({{std::nan(""), 1}}), std::invalid_argument);
}

TEST_CASE("tagged modes merge with left-before-right ties") {
    const SplitSpectrum split = split_box(0.5, 3);  // both sides 4, 16, 36
    const auto modes = tagged_modes(split, 6);
    REQUIRE(modes.size() == 6);
    CHECK(modes[0].energy == 4.0);
    CHECK(modes[0].side == Side::Left);
    CHECK(modes[1].energy == 4.0);
    CHECK(modes[1].side == Side::Right);
    CHECK(modes[2].energy == 16.0);
    CHECK(modes[2].side == Side::Left);
}

TEST_CASE("tagged modes expand degeneracies") {
    SplitSpectrum split;
    split.left = make_spectrum({{1.0, 2}});
    split.right = make_spectrum({{2.0, 1}});
    split.lambda = 0.5;
    const auto modes = tagged_modes(split, 3);
    REQUIRE(modes.size() == 3);
    CHECK(modes[0].side == Side::Left);
    CHECK(modes[1].side == Side::Left);
    CHECK(modes[2].side == Side::Right);
}

TEST_CASE("truncation order: particle-count floor binds at low temperature") {
    // At beta = 25 the Boltzmann tail is astronomically small, so the
    // K >= N + 10 floor is what decides the order.
    CHECK(truncation_order(box_spectrum(1.0, 64), 25.0, 1, 1e-16) == 11);
    CHECK(truncation_order(box_spectrum(1.0, 64), 25.0, 4, 1e-16) == 14);
}

TEST_CASE("truncation order: tail bound binds at high temperature") {
    // exp(-0.01 (K^2 - 1)) <= 1e-16 first holds at K = 61.
    CHECK(truncation_order(box_spectrum(1.0, 100), 0.01, 1, 1e-16) == 61);
}

TEST_CASE("truncation refuses spectra that cannot certify the tail") {
    const Spectrum tiny = make_spectrum({{1.0, 1}, {4.0, 1}});
    CHECK_THROWS_AS(truncation_order(tiny, 0.01, 1, 1e-16), insufficient_levels_error);
}

TEST_CASE("parse_spectrum reads the documented format") {
    std::istringstream in(
        "# reference levels\n"
        "1.0, 1\n"
        "\n"
        "4.0,2   # degenerate pair\n"
        "9.0,1\n");
    const Spectrum s = parse_spectrum(in, "inline");
    REQUIRE(s.size() == 3);
    CHECK(s.levels[1].energy == 4.0);
    CHECK(s.levels[1].degeneracy == 2);
}

TEST_CASE("parse_spectrum errors carry the line number") {
    std::istringstream bad("1.0,1\noops,1\n");
    try {
        parse_spectrum(bad, "demo");
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("demo:2") != std::string::npos);
    }

    std::istringstream neg("1.0,-2\n");
    CHECK_THROWS_AS(parse_spectrum(neg, "demo"), std::invalid_argument);
}

TEST_CASE("scale_spectrum divides energies by width squared") {
    const Spectrum base = make_spectrum({{1.0, 1}, {2.5, 2}});
    const Spectrum scaled = scale_spectrum(base, 0.5);
    CHECK(scaled.levels[0].energy == 4.0);
    CHECK(scaled.levels[1].energy == 10.0);
    CHECK(scaled.levels[1].degeneracy == 2);
}
