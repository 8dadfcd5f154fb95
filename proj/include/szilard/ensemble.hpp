#pragma once

// Exact N-particle canonical partition functions for bosons, fermions, and
// distinguishable particles on a truncated spectrum.  Everything is computed
// in the log domain relative to the relevant ground energy, so evaluations
// stay finite for beta up to ~1e4.

#include <string_view>

#include "szilard/log_weight.hpp"
#include "szilard/spectrum.hpp"

namespace szilard {

enum class Statistics { Boson, Fermion, Distinguishable };

const char* to_string(Statistics stat);

// Accepts "boson", "fermion", "dist" (and "distinguishable"); throws
// std::invalid_argument otherwise.
Statistics parse_statistics(std::string_view name);

// Single-particle partition sum z1 = sum_i g_i e^{-beta eps_i}, computed by
// factoring out e^{-beta eps_1} so the residual sum lies in [g_1, sum g_i].
LogWeight z1(const Spectrum& spectrum, double beta);

// N-particle canonical partition function.
//   Distinguishable: z1^N.
//   Boson: occupation-number recursion Z(n) = (1/n) sum_k z1(k beta) Z(n-k),
//          all terms positive, evaluated with log-sum-exp.
//   Fermion: elementary-symmetric-polynomial recurrence over the expanded
//          modes, which is cancellation-free and stable at any beta (the
//          textbook alternating recursion loses a relative-precision factor
//          of exp(beta * (E_F - n eps_1)), E_F the Pauli ground energy, and
//          returns garbage once that nears 1/eps_machine; it is kept in
//          detail:: as a cross-check at well-conditioned parameters).
// Throws pauli_capacity_error when n exceeds the fermion mode count.
LogWeight z_many(const Spectrum& spectrum, Statistics stat, int n, double beta);

// ln C(n, k) via lgamma.
double log_binomial(int n, int k);

// Partition function of the sector with n_left particles on the left:
// z_many(left, n_left) * z_many(right, n - n_left).  For distinguishable
// particles with count_identities set, multiplied by C(n, n_left) to count
// which particles sit left; with the flag clear the identities are fixed and
// no combinatorial factor applies.
LogWeight z_sector(const SplitSpectrum& split, Statistics stat, int n_left, int n,
                   double beta, bool count_identities);

// F = -T ln Z.  Throws std::invalid_argument unless Z is positive.
double free_energy(const LogWeight& z, double temperature);

namespace detail {

// Alternating-sign fermion recursion
//   Z(n) = (1/n) sum_{k=1..n} (-1)^{k+1} z1(k beta) Z(n-k),
// in signed log domain with compensated accumulation.  The partial terms
// have magnitude ~exp(-n beta eps_1) while the result is exp(-beta E_F)
// with E_F the sum of the n lowest mode energies, so the cancellation costs
// exp(beta (E_F - n eps_1)) in relative precision; trust it only while that
// factor stays well below 1/eps_machine.  Cross-check for the primary path.
LogWeight z_fermi_alternating(const Spectrum& spectrum, int n, double beta);

}  // namespace detail

}  // namespace szilard
