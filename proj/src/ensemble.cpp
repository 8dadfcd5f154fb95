#include "szilard/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace szilard {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_counts(int n, double beta) {
    if (n < 0) throw std::invalid_argument("particle count must be non-negative");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be positive and finite");
}

// log z1(m * beta) for m = 1..max_multiple; the recursions below consume
// these repeatedly, so they are computed once per (spectrum, beta, n).
std::vector<double> log_z1_powers(const Spectrum& spectrum, double beta, int max_multiple) {
    std::vector<double> out(static_cast<std::size_t>(max_multiple) + 1, kNegInf);
    for (int m = 1; m <= max_multiple; ++m)
        out[static_cast<std::size_t>(m)] = z1(spectrum, m * beta).log();
    return out;
}

// Shift-by-max log-sum-exp of strictly positive terms.
double log_sum(const std::vector<double>& logs) {
    double max_log = kNegInf;
    for (double l : logs) max_log = std::max(max_log, l);
    if (max_log == kNegInf) return kNegInf;
    double total = 0.0;
    for (double l : logs) total += std::exp(l - max_log);
    return max_log + std::log(total);
}

// Boson partition function via the occupation recursion
//   Z(m) = (1/m) sum_{k=1..m} z1(k beta) Z(m-k),
// every term positive, all arithmetic in the log domain.
double log_z_bose(const Spectrum& spectrum, int n, double beta) {
    const std::vector<double> lz1 = log_z1_powers(spectrum, beta, n);
    std::vector<double> lz(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        terms.clear();
        for (int k = 1; k <= m; ++k)
            terms.push_back(lz1[static_cast<std::size_t>(k)] + lz[static_cast<std::size_t>(m - k)]);
        lz[static_cast<std::size_t>(m)] = log_sum(terms) - std::log(static_cast<double>(m));
    }
    return lz[static_cast<std::size_t>(n)];
}

// Fermion partition function as the n-th elementary symmetric polynomial of
// the mode Boltzmann factors x_j = e^{-beta eps_j}, via the cancellation-free
// column recurrence e_j <- e_j + x * e_{j-1}.  Stable at any beta because no
// subtraction ever occurs.
double log_z_fermi(const Spectrum& spectrum, int n, double beta) {
    if (spectrum.total_modes() < n) {
        std::ostringstream msg;
        msg << "Pauli capacity exceeded: " << n << " fermions, "
            << spectrum.total_modes() << " modes";
        throw pauli_capacity_error(msg.str());
    }
    std::vector<double> esp(static_cast<std::size_t>(n) + 1, kNegInf);
    esp[0] = 0.0;
    int seen = 0;
    for (const Level& level : spectrum.levels) {
        const double y = -beta * level.energy;
        for (int d = 0; d < level.degeneracy; ++d) {
            ++seen;
            for (int j = std::min(seen, n); j >= 1; --j)
                esp[static_cast<std::size_t>(j)] = detail::log_add(
                    esp[static_cast<std::size_t>(j)], y + esp[static_cast<std::size_t>(j - 1)]);
        }
    }
    return esp[static_cast<std::size_t>(n)];
}

}  // namespace

const char* to_string(Statistics stat) {
    switch (stat) {
        case Statistics::Boson: return "boson";
        case Statistics::Fermion: return "fermion";
        case Statistics::Distinguishable: return "dist";
    }
    return "?";
}

Statistics parse_statistics(std::string_view name) {
    if (name == "boson") return Statistics::Boson;
    if (name == "fermion") return Statistics::Fermion;
    if (name == "dist" || name == "distinguishable") return Statistics::Distinguishable;
    throw std::invalid_argument("unknown statistics '" + std::string(name) +
                                "' (expected boson, fermion, or dist)");
}

LogWeight z1(const Spectrum& spectrum, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("z1: beta must be positive and finite");
    // Factor out the ground term: the residual sum lies in [g_1, sum g_i],
    // so it never under- or overflows regardless of beta.
    const double ground = spectrum.ground_energy();
    double resid = 0.0;
    for (auto it = spectrum.levels.rbegin(); it != spectrum.levels.rend(); ++it)
        resid += it->degeneracy * std::exp(-beta * (it->energy - ground));
    return LogWeight::from_log(-beta * ground + std::log(resid));
}

LogWeight z_many(const Spectrum& spectrum, Statistics stat, int n, double beta) {
    check_counts(n, beta);
    if (n == 0) return LogWeight::one();
    switch (stat) {
        case Statistics::Distinguishable:
            return LogWeight::from_log(n * z1(spectrum, beta).log());
        case Statistics::Boson:
            return LogWeight::from_log(log_z_bose(spectrum, n, beta));
        case Statistics::Fermion:
            return LogWeight::from_log(log_z_fermi(spectrum, n, beta));
    }
    throw std::logic_error("z_many: unhandled statistics");
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("log_binomial: k outside [0, n]");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

LogWeight z_sector(const SplitSpectrum& split, Statistics stat, int n_left, int n,
                   double beta, bool count_identities) {
    if (n_left < 0 || n_left > n)
        throw std::invalid_argument("z_sector: n_left outside [0, n]");
    LogWeight z = z_many(split.left, stat, n_left, beta) *
                  z_many(split.right, stat, n - n_left, beta);
    if (stat == Statistics::Distinguishable && count_identities)
        z *= LogWeight::from_log(log_binomial(n, n_left));
    return z;
}

double free_energy(const LogWeight& z, double temperature) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("free_energy: temperature must be positive");
    if (!z.positive())
        throw std::invalid_argument("free_energy: partition function must be positive");
    return -temperature * z.log_magnitude;
}

namespace detail {

LogWeight z_fermi_alternating(const Spectrum& spectrum, int n, double beta) {
    check_counts(n, beta);
    if (spectrum.total_modes() < n)
        throw pauli_capacity_error("Pauli capacity exceeded");
    const std::vector<double> lz1 = log_z1_powers(spectrum, beta, n);
    std::vector<LogWeight> z(static_cast<std::size_t>(n) + 1);
    z[0] = LogWeight::one();
    std::vector<LogWeight> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        terms.clear();
        for (int k = 1; k <= m; ++k) {
            const int sign = (k % 2 == 1) ? +1 : -1;
            terms.push_back(LogWeight::from_log(lz1[static_cast<std::size_t>(k)], sign) *
                            z[static_cast<std::size_t>(m - k)]);
        }
        LogWeight sum = signed_log_sum(terms);
        z[static_cast<std::size_t>(m)] =
            sum * LogWeight::from_value(1.0 / static_cast<double>(m));
    }
    return z[static_cast<std::size_t>(n)];
}

}  // namespace detail

}  // namespace szilard
