#include "szilard/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

// Everything here is deliberately naive: explicit occupation vectors, small
// binomials by repeated multiplication, one fixed enumeration order.  The
// only numerical care taken is a ground-energy shift plus compensated
// summation so results are bit-reproducible and accurate.

namespace szilard::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double binomial(int a, int b) {
    if (b < 0 || b > a) return 0.0;
    b = std::min(b, a - b);
    double c = 1.0;
    for (int i = 1; i <= b; ++i) c = c * (a - b + i) / i;
    return c;
}

// Number of occupation vectors the enumeration below will visit.
double configuration_count(const Spectrum& spectrum, Statistics stat, int n) {
    const int k = spectrum.size();
    switch (stat) {
        case Statistics::Boson:
            return binomial(n + k - 1, n);
        case Statistics::Distinguishable:
            return std::pow(static_cast<double>(k), n);
        case Statistics::Fermion: {
            // Polynomial product: coefficient DP over levels.
            std::vector<double> counts(static_cast<std::size_t>(n) + 1, 0.0);
            counts[0] = 1.0;
            for (const Level& level : spectrum.levels) {
                const int cap = std::min(level.degeneracy, n);
                for (int r = n; r >= 1; --r) {
                    double acc = counts[static_cast<std::size_t>(r)];
                    for (int take = 1; take <= std::min(cap, r); ++take)
                        acc += counts[static_cast<std::size_t>(r - take)];
                    counts[static_cast<std::size_t>(r)] = acc;
                }
            }
            double total = 0.0;
            for (double c : counts) total += c;
            return total;
        }
    }
    return 0.0;
}

void check_instance_size(const Spectrum& spectrum, Statistics stat, int n,
                         std::uint64_t config_cap) {
    const double count = configuration_count(spectrum, stat, n);
    if (!(count <= static_cast<double>(config_cap))) {
        std::ostringstream msg;
        msg << "oracle refuses instance: ~" << count << " configurations exceed cap "
            << config_cap;
        throw instance_too_large_error(msg.str());
    }
}

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum - comp; }
};

// Lowest achievable total energy, used as the shift that keeps every
// enumerated term in [0, weight].
double ground_configuration_energy(const Spectrum& spectrum, Statistics stat, int n) {
    if (stat != Statistics::Fermion) return n * spectrum.ground_energy();
    double energy = 0.0;
    int left = n;
    for (const Level& level : spectrum.levels) {
        const int take = std::min(level.degeneracy, left);
        energy += take * level.energy;
        left -= take;
        if (left == 0) break;
    }
    return energy;
}

// Depth-first enumeration of occupation vectors for bosons/fermions.
void enumerate_occupations(const Spectrum& spectrum, Statistics stat, double beta,
                           double shift, std::size_t level, int remaining,
                           double weight, double energy, KahanSum& acc) {
    if (level == spectrum.levels.size()) {
        if (remaining == 0) acc.add(weight * std::exp(-beta * energy + shift));
        return;
    }
    const Level& lv = spectrum.levels[level];
    const int max_occ =
        (stat == Statistics::Fermion) ? std::min(lv.degeneracy, remaining) : remaining;
    for (int occ = 0; occ <= max_occ; ++occ) {
        const double level_weight = (stat == Statistics::Fermion)
                                        ? binomial(lv.degeneracy, occ)
                                        : binomial(occ + lv.degeneracy - 1, occ);
        enumerate_occupations(spectrum, stat, beta, shift, level + 1, remaining - occ,
                              weight * level_weight, energy + occ * lv.energy, acc);
    }
}

// Odometer over per-particle level assignments for distinguishable particles.
double enumerate_assignments(const Spectrum& spectrum, int n, double beta, double shift) {
    KahanSum acc;
    std::vector<int> level_of(static_cast<std::size_t>(n), 0);
    while (true) {
        double weight = 1.0;
        double energy = 0.0;
        for (int p = 0; p < n; ++p) {
            const Level& lv = spectrum.levels[static_cast<std::size_t>(level_of[static_cast<std::size_t>(p)])];
            weight *= lv.degeneracy;
            energy += lv.energy;
        }
        acc.add(weight * std::exp(-beta * energy + shift));
        int p = 0;
        for (; p < n; ++p) {
            if (++level_of[static_cast<std::size_t>(p)] < spectrum.size()) break;
            level_of[static_cast<std::size_t>(p)] = 0;
        }
        if (p == n) break;
    }
    return acc.value();
}

}  // namespace

LogWeight enumerate_z(const Spectrum& spectrum, Statistics stat, int n, double beta,
                      std::uint64_t config_cap) {
    if (n < 0) throw std::invalid_argument("enumerate_z: negative particle count");
    if (!(beta > 0.0)) throw std::invalid_argument("enumerate_z: beta must be positive");
    if (n == 0) return LogWeight::one();
    if (stat == Statistics::Fermion && spectrum.total_modes() < n)
        return LogWeight::zero();  // no admissible configuration
    check_instance_size(spectrum, stat, n, config_cap);

    const double e_min = ground_configuration_energy(spectrum, stat, n);
    const double shift = beta * e_min;
    double total = 0.0;
    if (stat == Statistics::Distinguishable) {
        total = enumerate_assignments(spectrum, n, beta, shift);
    } else {
        KahanSum acc;
        enumerate_occupations(spectrum, stat, beta, shift, 0, n, 1.0, 0.0, acc);
        total = acc.value();
    }
    if (total <= 0.0) return LogWeight::zero();
    return LogWeight::from_log(std::log(total) - shift);
}

std::vector<SectorProbability> enumerate_sector_probabilities(
    const SplitSpectrum& split, Statistics stat, int n, double beta,
    std::uint64_t config_cap) {
    std::vector<double> log_weight(static_cast<std::size_t>(n) + 1, kNegInf);
    for (int n_left = 0; n_left <= n; ++n_left) {
        LogWeight w = enumerate_z(split.left, stat, n_left, beta, config_cap) *
                      enumerate_z(split.right, stat, n - n_left, beta, config_cap);
        if (stat == Statistics::Distinguishable)
            w *= LogWeight::from_log(log_binomial(n, n_left));
        if (!w.is_zero()) log_weight[static_cast<std::size_t>(n_left)] = w.log();
    }
    double max_log = kNegInf;
    for (double l : log_weight) max_log = std::max(max_log, l);
    if (max_log == kNegInf)
        throw pauli_capacity_error("enumerate_sector_probabilities: no feasible sector");
    std::vector<SectorProbability> out;
    out.reserve(log_weight.size());
    double total = 0.0;
    for (int n_left = 0; n_left <= n; ++n_left) {
        const double l = log_weight[static_cast<std::size_t>(n_left)];
        const double w = (l == kNegInf) ? 0.0 : std::exp(l - max_log);
        total += w;
        out.push_back({n_left, w});
    }
    for (SectorProbability& s : out) s.probability /= total;
    return out;
}

}  // namespace szilard::oracle
