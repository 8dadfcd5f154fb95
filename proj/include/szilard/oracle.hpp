#pragma once

// Brute-force enumeration over many-body configurations on small instances.
// This is the independent ground truth for the closed forms and recursions in
// the ensemble module: it never shares code with them and never approximates.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "szilard/ensemble.hpp"

namespace szilard::oracle {

// The oracle refuses instances above the configuration cap rather than
// sampling: an oracle that approximates is not an oracle.
struct instance_too_large_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultConfigCap = 10'000'000;

// Exact partition function by explicit enumeration.
//   Boson: occupation vectors over levels, weight prod C(n_i + g_i - 1, n_i).
//   Fermion: occupation vectors with n_i <= g_i, weight prod C(g_i, n_i).
//   Distinguishable: per-particle level assignments, weight prod g_{level}.
// Throws instance_too_large_error if the configuration count exceeds the cap.
LogWeight enumerate_z(const Spectrum& spectrum, Statistics stat, int n, double beta,
                      std::uint64_t config_cap = kDefaultConfigCap);

struct SectorProbability {
    int n_left = 0;
    double probability = 0.0;
};

// Probability of finding n_left particles on the left, for every
// n_left = 0..n, proportional to the enumerated sector weights (with the
// C(n, n_left) identity factor for distinguishable particles).  Sectors a
// fermion cannot fill get probability zero.  Probabilities sum to 1.
std::vector<SectorProbability> enumerate_sector_probabilities(
    const SplitSpectrum& split, Statistics stat, int n, double beta,
    std::uint64_t config_cap = kDefaultConfigCap);

}  // namespace szilard::oracle
