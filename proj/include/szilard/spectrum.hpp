#pragma once

// Single-particle energy spectra for the cylinder, with and without the
// barrier.  Dimensionless units throughout: k = 1 and the ground energy of
// the full (unit-width) box is 1, so temperatures are in units of eps0/k.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace szilard {

// Raised when a fermion count exceeds the number of available modes.
struct pauli_capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a spectrum is too short to certify a truncation bound.
struct insufficient_levels_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Level {
    double energy = 0.0;
    int degeneracy = 1;
};

// Sorted single-particle levels with integer degeneracies.
// Invariants: non-empty, energies strictly increasing, degeneracies >= 1.
struct Spectrum {
    std::vector<Level> levels;

    int size() const { return static_cast<int>(levels.size()); }
    double ground_energy() const { return levels.front().energy; }
    // Total number of single-particle modes (fermion capacity).
    long long total_modes() const;
};

// Validates and canonicalizes: sorts by energy and merges levels whose
// energies agree within relative tolerance merge_tol (degeneracies add).
Spectrum make_spectrum(std::vector<Level> levels, double merge_tol = 1e-12);

// Infinite square well of the given width: E_n = n^2 / width^2, n = 1..k,
// all degeneracies 1.  The unit-width box has ground energy exactly 1.
Spectrum box_spectrum(double width, int k);

// Every energy divided by width^2; models squeezing a reference (unit-width)
// spectrum into a region of the given relative width.
Spectrum scale_spectrum(const Spectrum& base, double width);

// The cylinder split by a zero-width barrier at position lambda.
struct SplitSpectrum {
    Spectrum left;
    Spectrum right;
    double lambda = 0.5;
};

// Box split: left = box_spectrum(lambda, k), right = box_spectrum(1-lambda, k).
SplitSpectrum split_box(double lambda, int k);

// Split for an arbitrary reference spectrum: each side is the reference
// scaled to its width (left by lambda, right by 1-lambda).
SplitSpectrum split_spectrum(const Spectrum& base, double lambda);

enum class Side { Left, Right };

struct TaggedMode {
    double energy = 0.0;
    Side side = Side::Left;
};

// The first max_modes single-particle modes of the two sides merged into one
// sorted list, each tagged with its side; degenerate levels contribute one
// entry per mode.  Ties are ordered left before right, which fixes the
// fermion filling convention.
std::vector<TaggedMode> tagged_modes(const SplitSpectrum& split, int max_modes);

// Expand a spectrum into per-mode energies (degeneracy g becomes g entries),
// keeping at most max_modes.
std::vector<double> mode_energies(const Spectrum& spectrum, int max_modes);

// Smallest level count K such that K >= n_particles + 10 and the Boltzmann
// tail bound g_K * exp(-beta * (eps_K - eps_1)) <= tol holds.  Throws
// insufficient_levels_error when the spectrum cannot certify the bound;
// sums are never silently truncated.
int truncation_order(const Spectrum& spectrum, double beta, int n_particles, double tol);

// Parse "energy,degeneracy" lines ('#' starts a comment, blank lines
// ignored); returns the canonicalized spectrum.  Errors mention the
// offending line number.  `name` labels the stream in error messages.
Spectrum parse_spectrum(std::istream& in, const std::string& name);

Spectrum load_spectrum(const std::string& path);

}  // namespace szilard
