#pragma once

// The full Szilard cycle at any temperature: barrier insertion, measurement,
// quasi-static extraction, and erasure, with an exact work ledger.
//
// Work convention: positive numbers are work extracted by the engine.  All
// phase works are kT ln(Z_after / Z_before) between equilibrium endpoints.

#include <optional>
#include <string>
#include <vector>

#include "szilard/ensemble.hpp"

namespace szilard {

struct EngineConfig {
    Statistics stat = Statistics::Boson;
    int n_particles = 1;
    double lambda = 0.5;      // barrier position in (0,1)
    double temperature = 1.0; // units of eps0/k
    // Level count per side; 0 selects the smallest certified truncation
    // order automatically.  A manual value must still pass certification.
    int levels = 0;
    double truncation_tol = 1e-16;
    // Reference (unit-width) spectrum; defaults to the particle in a box.
    std::optional<Spectrum> base_spectrum;
};

struct MeasurementScheme {
    enum class Kind {
        Trivial,   // single outcome, no information
        Count,     // one outcome per left-count sector
        Coarse,    // explicit grouping of sectors into outcomes
        Resolved,  // distinguishable only: which particles sit left
    };

    Kind kind = Kind::Count;
    // Coarse only: partition of {0..N} into disjoint, covering groups.
    std::vector<std::vector<int>> groups;

    static MeasurementScheme trivial() { return {Kind::Trivial, {}}; }
    static MeasurementScheme count() { return {Kind::Count, {}}; }
    static MeasurementScheme coarse(std::vector<std::vector<int>> groups);
    static MeasurementScheme resolved() { return {Kind::Resolved, {}}; }
};

const char* to_string(MeasurementScheme::Kind kind);

struct Outcome {
    std::string label;
    double probability = 0.0;
    LogWeight weight;          // Z_m, the conditional partition function
    std::vector<int> sectors;  // left-count sectors contributing to Z_m
    // Resolved outcomes fix which particles are left; sector weights then
    // carry no C(N, n) identity factor.
    bool identities_fixed = false;
};

struct OutcomeDistribution {
    std::vector<Outcome> outcomes;
    LogWeight z_bar;  // post-insertion mixture, sum over all feasible sectors
};

struct WorkLedger {
    double w1 = 0.0;  // insertion
    std::vector<double> w2 = {};  // extraction, one entry per outcome
    double expected_w2 = 0.0;
    double net_work = 0.0;          // w1 + sum_m p_m w2[m]
    double entropy = 0.0;           // S = -sum p_m ln p_m, units of k
    double erasure_cost = 0.0;      // kT * S
    double net_with_erasure = 0.0;  // net_work - erasure_cost
};

struct CycleResult {
    WorkLedger ledger;
    OutcomeDistribution distribution;
};

// W1 = kT ln(Z_bar / Z_0): the cylinder starts barrier-free (Z_0) and ends
// in the decohered sector mixture (Z_bar).  Negative when insertion costs
// work, which is the generic case.
double insertion_work(const EngineConfig& config);

// Outcome distribution of the scheme.  Fermion sectors violating Pauli
// capacity carry zero weight and are dropped from the support.
OutcomeDistribution measure(const EngineConfig& config, const MeasurementScheme& scheme);

// W2(m) = kT ln(Z_0 / Z_m): quasi-static extraction from the post-measurement
// state back to the barrier-free cylinder.  Throws std::invalid_argument for
// a zero-probability outcome.
double extraction_work(const EngineConfig& config, const Outcome& outcome);

// Runs the whole cycle and assembles the ledger.  The identity
// net_work == kT * entropy holds for every configuration and scheme; it is
// the finite-temperature statement behind the low-temperature ln M results.
CycleResult run_cycle(const EngineConfig& config, const MeasurementScheme& scheme);

// Shannon entropy -sum p_m ln p_m of the outcome distribution, in units of k
// (zero-probability outcomes contribute zero).
double information_gain(const OutcomeDistribution& distribution);

struct ForceProfilePoint {
    double lambda = 0.0;
    double free_energy = 0.0;
    double force = 0.0;  // -dF/dlambda, central difference
    bool feasible = true;
};

// Free energy and generalized force on the barrier as functions of lambda,
// holding the outcome's sector content (and identity flag) fixed.  Fermion
// capacity violations flag the point infeasible instead of skipping it.
std::vector<ForceProfilePoint> free_energy_profile(const EngineConfig& config,
                                                   const Outcome& outcome,
                                                   const std::vector<double>& lambda_grid);

struct EquilibriumPosition {
    double lambda_star = 0.5;
    double free_energy = 0.0;
    // Set when the minimum is attracted to the edge of (0,1); lambda_star is
    // then clamped to [1e-4, 1 - 1e-4].
    bool at_boundary = false;
};

// argmin_lambda F(lambda) for the outcome: 1e-3 grid scan followed by
// golden-section refinement to |dlambda| <= 1e-6.
EquilibriumPosition equilibrium_position(const EngineConfig& config, const Outcome& outcome);

}  // namespace szilard
