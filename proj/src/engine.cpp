#include "szilard/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace szilard {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr long double kNegInfL = -std::numeric_limits<long double>::infinity();

// Compensated long double accumulator.  The ledger combines logarithms whose
// magnitudes reach ~1e4 while its closure identities are checked at
// 1e-12 * kT, so the assembly carries extra precision even though the
// underlying partition values are double.
struct KahanL {
    long double sum = 0.0L;
    long double comp = 0.0L;
    void add(long double x) {
        const long double y = x - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    long double value() const { return sum - comp; }
};

long double log_sum_exp(const std::vector<long double>& logs) {
    long double max_log = kNegInfL;
    for (long double l : logs) max_log = std::max(max_log, l);
    if (max_log == kNegInfL) return kNegInfL;
    KahanL acc;
    for (long double l : logs) acc.add(expl(l - max_log));
    return max_log + logl(acc.value());
}

double log_sum_exp(const std::vector<double>& logs) {
    double max_log = kNegInf;
    for (double l : logs) max_log = std::max(max_log, l);
    if (max_log == kNegInf) return kNegInf;
    double total = 0.0;
    for (double l : logs) total += std::exp(l - max_log);
    return max_log + std::log(total);
}

struct Prepared {
    Statistics stat = Statistics::Boson;
    int n = 0;
    double beta = 0.0;
    double kT = 0.0;
    double lambda = 0.5;
    int levels = 0;
    Spectrum full;       // barrier-free cylinder, truncated to `levels`
    SplitSpectrum split;
    bool box = true;     // false when a custom reference spectrum is used
};

Spectrum truncate(const Spectrum& s, int k) {
    Spectrum out;
    out.levels.assign(s.levels.begin(), s.levels.begin() + k);
    return out;
}

// Builds the working spectra and certifies the truncation.  One certificate
// on the full cylinder covers both sides: a side of width w < 1 has every
// energy (and hence every tail exponent) scaled by 1/w^2 > 1, so its
// Boltzmann tail at the same level count is strictly smaller.
Prepared prepare(const EngineConfig& config) {
    if (config.n_particles < 0)
        throw std::invalid_argument("engine: particle count must be non-negative");
    if (!(config.lambda > 0.0) || !(config.lambda < 1.0))
        throw std::invalid_argument("engine: lambda must lie in (0,1)");
    if (!(config.temperature > 0.0) || !std::isfinite(config.temperature))
        throw std::invalid_argument("engine: temperature must be positive");
    if (!(config.truncation_tol > 0.0) || !(config.truncation_tol < 1.0))
        throw std::invalid_argument("engine: truncation tolerance must lie in (0,1)");
    if (config.levels < 0)
        throw std::invalid_argument("engine: level count must be non-negative");

    Prepared p;
    p.stat = config.stat;
    p.n = config.n_particles;
    p.kT = config.temperature;
    p.beta = 1.0 / config.temperature;
    p.lambda = config.lambda;

    if (config.base_spectrum) {
        p.box = false;
        const Spectrum base = make_spectrum(config.base_spectrum->levels);
        int k_limit = config.levels > 0 ? config.levels : base.size();
        if (k_limit > base.size()) {
            std::ostringstream msg;
            msg << "engine: requested " << k_limit << " levels but the spectrum has "
                << base.size();
            throw insufficient_levels_error(msg.str());
        }
        const Spectrum capped = truncate(base, k_limit);
        const int certified = truncation_order(capped, p.beta, p.n, config.truncation_tol);
        p.levels = config.levels > 0 ? k_limit : certified;
        p.full = truncate(base, p.levels);
    } else {
        if (config.levels > 0) {
            p.full = box_spectrum(1.0, config.levels);
            truncation_order(p.full, p.beta, p.n, config.truncation_tol);  // certify or throw
            p.levels = config.levels;
        } else {
            int k = p.n + 10;
            for (;;) {
                const Spectrum candidate = box_spectrum(1.0, k);
                try {
                    p.levels = truncation_order(candidate, p.beta, p.n, config.truncation_tol);
                    break;
                } catch (const insufficient_levels_error&) {
                    if (k > (1 << 22)) throw;
                    k *= 2;
                }
            }
            p.full = box_spectrum(1.0, p.levels);
        }
    }
    p.split = p.box ? split_box(p.lambda, p.levels) : split_spectrum(p.full, p.lambda);
    return p;
}

SplitSpectrum split_at(const Prepared& p, double lambda) {
    return p.box ? split_box(lambda, p.levels) : split_spectrum(p.full, lambda);
}

struct SectorTable {
    std::vector<int> n_left;     // feasible sectors, ascending
    std::vector<double> log_z;
};

SectorTable feasible_sectors(const Prepared& p, bool count_identities) {
    SectorTable table;
    for (int n = 0; n <= p.n; ++n) {
        try {
            table.log_z.push_back(
                z_sector(p.split, p.stat, n, p.n, p.beta, count_identities).log());
            table.n_left.push_back(n);
        } catch (const pauli_capacity_error&) {
            // Zero-weight sector: excluded from the support.
        }
    }
    if (table.n_left.empty())
        throw pauli_capacity_error("engine: no sector can hold the particles");
    return table;
}

// "0-2,4" style rendering of a sorted sector list (contiguous runs collapse
// to ranges, matching the --groups flag syntax).
std::string render_sectors(const std::vector<int>& sorted_sectors) {
    std::string out;
    std::size_t i = 0;
    while (i < sorted_sectors.size()) {
        std::size_t j = i;
        while (j + 1 < sorted_sectors.size() &&
               sorted_sectors[j + 1] == sorted_sectors[j] + 1)
            ++j;
        if (!out.empty()) out += ',';
        out += std::to_string(sorted_sectors[i]);
        if (j > i) out += '-' + std::to_string(sorted_sectors[j]);
        i = j + 1;
    }
    return out;
}

void validate_scheme(const MeasurementScheme& scheme, Statistics stat, int n) {
    switch (scheme.kind) {
        case MeasurementScheme::Kind::Trivial:
        case MeasurementScheme::Kind::Count:
            return;
        case MeasurementScheme::Kind::Resolved:
            if (stat != Statistics::Distinguishable)
                throw std::invalid_argument(
                    "resolved measurement requires distinguishable particles");
            if (n > 20)
                throw std::invalid_argument(
                    "resolved measurement limited to 20 particles (2^N outcomes)");
            return;
        case MeasurementScheme::Kind::Coarse: {
            if (scheme.groups.empty())
                throw std::invalid_argument("coarse measurement needs at least one group");
            std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
            for (const auto& group : scheme.groups) {
                if (group.empty())
                    throw std::invalid_argument("coarse measurement: empty group");
                for (int sector : group) {
                    if (sector < 0 || sector > n)
                        throw std::invalid_argument("coarse measurement: sector " +
                                                    std::to_string(sector) +
                                                    " outside [0, N]");
                    if (seen[static_cast<std::size_t>(sector)]++)
                        throw std::invalid_argument("coarse measurement: sector " +
                                                    std::to_string(sector) +
                                                    " appears twice");
                }
            }
            for (int sector = 0; sector <= n; ++sector)
                if (!seen[static_cast<std::size_t>(sector)])
                    throw std::invalid_argument("coarse measurement: sector " +
                                                std::to_string(sector) + " not covered");
            return;
        }
    }
    throw std::logic_error("unhandled measurement kind");
}

struct MeasureData {
    OutcomeDistribution dist;
    std::vector<long double> d;    // log Z_m - log Z_bar
    std::vector<long double> lnp;  // normalized log probabilities
    long double log_z_bar = 0.0L;
};

// Builds the outcome list with its probabilities.  The normalizer is the
// log-sum-exp of the outcome logs themselves, so probabilities sum to one at
// long double precision by construction, for every scheme.
MeasureData build_outcomes(const Prepared& p, const MeasurementScheme& scheme) {
    validate_scheme(scheme, p.stat, p.n);

    std::vector<Outcome> outcomes;
    std::vector<double> log_m;

    switch (scheme.kind) {
        case MeasurementScheme::Kind::Trivial: {
            const SectorTable table = feasible_sectors(p, true);
            const double lz = log_sum_exp(table.log_z);
            outcomes.push_back({"all", 0.0, LogWeight::from_log(lz), table.n_left, false});
            log_m.push_back(lz);
            break;
        }
        case MeasurementScheme::Kind::Count: {
            const SectorTable table = feasible_sectors(p, true);
            for (std::size_t i = 0; i < table.n_left.size(); ++i) {
                outcomes.push_back({"n=" + std::to_string(table.n_left[i]), 0.0,
                                    LogWeight::from_log(table.log_z[i]),
                                    {table.n_left[i]}, false});
                log_m.push_back(table.log_z[i]);
            }
            break;
        }
        case MeasurementScheme::Kind::Coarse: {
            const SectorTable table = feasible_sectors(p, true);
            for (const auto& group : scheme.groups) {
                std::vector<int> members;
                std::vector<double> logs;
                std::vector<int> sorted_group = group;
                std::sort(sorted_group.begin(), sorted_group.end());
                for (int sector : sorted_group) {
                    const auto it = std::find(table.n_left.begin(), table.n_left.end(), sector);
                    if (it == table.n_left.end()) continue;  // infeasible member
                    members.push_back(sector);
                    logs.push_back(
                        table.log_z[static_cast<std::size_t>(it - table.n_left.begin())]);
                }
                if (members.empty()) continue;  // group entirely infeasible: dropped
                const double lz = log_sum_exp(logs);
                outcomes.push_back({render_sectors(sorted_group), 0.0,
                                    LogWeight::from_log(lz), members, false});
                log_m.push_back(lz);
            }
            if (outcomes.empty())
                throw pauli_capacity_error("engine: every group is infeasible");
            break;
        }
        case MeasurementScheme::Kind::Resolved: {
            const double lz1_left = z1(p.split.left, p.beta).log();
            const double lz1_right = z1(p.split.right, p.beta).log();
            const std::uint32_t count = 1u << p.n;
            for (std::uint32_t mask = 0; mask < count; ++mask) {
                const int n_left = std::popcount(mask);
                const double lz = n_left * lz1_left + (p.n - n_left) * lz1_right;
                std::string label;
                for (int i = 0; i < p.n; ++i) label += (mask >> i) & 1u ? 'L' : 'R';
                if (p.n == 0) label = "none";
                outcomes.push_back(
                    {label, 0.0, LogWeight::from_log(lz), {n_left}, true});
                log_m.push_back(lz);
            }
            break;
        }
    }

    MeasureData md;
    const std::vector<long double> logs_l(log_m.begin(), log_m.end());
    md.log_z_bar = log_sum_exp(logs_l);
    md.d.reserve(log_m.size());
    for (double l : log_m) md.d.push_back(static_cast<long double>(l) - md.log_z_bar);
    // Renormalize: t0 is ~1 ulp away from zero and removing it pins
    // sum(p) == 1 at long double precision.
    const long double t0 = log_sum_exp(md.d);
    md.lnp.reserve(md.d.size());
    for (long double d : md.d) md.lnp.push_back(d - t0);
    for (std::size_t m = 0; m < outcomes.size(); ++m)
        outcomes[m].probability = static_cast<double>(expl(md.lnp[m]));
    md.dist.outcomes = std::move(outcomes);
    md.dist.z_bar = LogWeight::from_log(static_cast<double>(md.log_z_bar));
    return md;
}

// Conditional log partition function of an outcome at an arbitrary barrier
// position; nullopt when no contributing sector is feasible.
std::optional<double> outcome_log_z(const SplitSpectrum& split, Statistics stat, int n,
                                    double beta, const Outcome& outcome) {
    std::vector<double> logs;
    for (int sector : outcome.sectors) {
        try {
            logs.push_back(
                z_sector(split, stat, sector, n, beta, !outcome.identities_fixed).log());
        } catch (const pauli_capacity_error&) {
        }
    }
    if (logs.empty()) return std::nullopt;
    return log_sum_exp(logs);
}

}  // namespace

MeasurementScheme MeasurementScheme::coarse(std::vector<std::vector<int>> groups) {
    MeasurementScheme scheme;
    scheme.kind = Kind::Coarse;
    scheme.groups = std::move(groups);
    return scheme;
}

const char* to_string(MeasurementScheme::Kind kind) {
    switch (kind) {
        case MeasurementScheme::Kind::Trivial: return "trivial";
        case MeasurementScheme::Kind::Count: return "count";
        case MeasurementScheme::Kind::Coarse: return "coarse";
        case MeasurementScheme::Kind::Resolved: return "resolved";
    }
    return "?";
}

double insertion_work(const EngineConfig& config) {
    const Prepared p = prepare(config);
    const SectorTable table = feasible_sectors(p, true);
    std::vector<long double> logs(table.log_z.begin(), table.log_z.end());
    const long double log_z_bar = log_sum_exp(logs);
    const long double log_z0 =
        static_cast<long double>(z_many(p.full, p.stat, p.n, p.beta).log());
    return static_cast<double>(p.kT * (log_z_bar - log_z0));
}

OutcomeDistribution measure(const EngineConfig& config, const MeasurementScheme& scheme) {
    const Prepared p = prepare(config);
    return build_outcomes(p, scheme).dist;
}

double extraction_work(const EngineConfig& config, const Outcome& outcome) {
    if (!(outcome.probability > 0.0))
        throw std::invalid_argument("extraction_work: outcome has zero probability");
    const Prepared p = prepare(config);
    const long double log_z0 =
        static_cast<long double>(z_many(p.full, p.stat, p.n, p.beta).log());
    const long double log_zm = static_cast<long double>(outcome.weight.log());
    return static_cast<double>(p.kT * (log_z0 - log_zm));
}

CycleResult run_cycle(const EngineConfig& config, const MeasurementScheme& scheme) {
    const Prepared p = prepare(config);
    MeasureData md = build_outcomes(p, scheme);
    const long double log_z0 =
        static_cast<long double>(z_many(p.full, p.stat, p.n, p.beta).log());
    const long double kT = p.kT;
    const long double w1 = md.log_z_bar - log_z0;

    WorkLedger ledger;
    ledger.w1 = static_cast<double>(kT * w1);
    ledger.w2.resize(md.d.size());
    KahanL expected_w2, net, entropy;
    for (std::size_t m = 0; m < md.d.size(); ++m) {
        // (log Z_0 - log Z_bar) - d_m == log Z_0 - log Z_m, arranged so the
        // trivial scheme's W2 is the exact negation of W1.
        const long double w2m = (log_z0 - md.log_z_bar) - md.d[m];
        ledger.w2[m] = static_cast<double>(kT * w2m);
        const long double pm = expl(md.lnp[m]);
        expected_w2.add(pm * w2m);
        net.add(pm * -md.d[m]);
        entropy.add(pm * -md.lnp[m]);
    }
    // net/kT == -sum p_m d_m == S - t0 with the same p and d, which is why
    // net_with_erasure lands at long double rounding rather than inheriting
    // the (much larger) rounding of the partition logs themselves.
    ledger.expected_w2 = static_cast<double>(kT * expected_w2.value() + 0.0L);
    ledger.net_work = static_cast<double>(kT * net.value() + 0.0L);
    ledger.entropy = static_cast<double>(entropy.value() + 0.0L);
    ledger.erasure_cost = static_cast<double>(kT * entropy.value() + 0.0L);
    ledger.net_with_erasure =
        static_cast<double>(kT * (net.value() - entropy.value()) + 0.0L);
    return {std::move(ledger), std::move(md.dist)};
}

double information_gain(const OutcomeDistribution& distribution) {
    double s = 0.0;
    for (const Outcome& outcome : distribution.outcomes)
        if (outcome.probability > 0.0)
            s -= outcome.probability * std::log(outcome.probability);
    return s + 0.0;
}

std::vector<ForceProfilePoint> free_energy_profile(const EngineConfig& config,
                                                   const Outcome& outcome,
                                                   const std::vector<double>& lambda_grid) {
    const Prepared p = prepare(config);
    std::vector<ForceProfilePoint> points;
    points.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        if (!(lambda > 0.0) || !(lambda < 1.0))
            throw std::invalid_argument("free_energy_profile: lambda outside (0,1)");
        ForceProfilePoint point;
        point.lambda = lambda;
        const auto lz = outcome_log_z(split_at(p, lambda), p.stat, p.n, p.beta, outcome);
        if (!lz) {
            point.free_energy = std::numeric_limits<double>::quiet_NaN();
            point.force = std::numeric_limits<double>::quiet_NaN();
            point.feasible = false;
            points.push_back(point);
            continue;
        }
        point.free_energy = -p.kT * *lz;
        const double h = std::min({1e-5, lambda / 2.0, (1.0 - lambda) / 2.0});
        const auto lz_lo = outcome_log_z(split_at(p, lambda - h), p.stat, p.n, p.beta, outcome);
        const auto lz_hi = outcome_log_z(split_at(p, lambda + h), p.stat, p.n, p.beta, outcome);
        if (lz_lo && lz_hi) {
            const double f_lo = -p.kT * *lz_lo;
            const double f_hi = -p.kT * *lz_hi;
            point.force = -(f_hi - f_lo) / (2.0 * h);
        } else {
            point.force = std::numeric_limits<double>::quiet_NaN();
        }
        points.push_back(point);
    }
    return points;
}

EquilibriumPosition equilibrium_position(const EngineConfig& config, const Outcome& outcome) {
    const Prepared p = prepare(config);
    const auto free_energy_at = [&](double lambda) -> double {
        const auto lz = outcome_log_z(split_at(p, lambda), p.stat, p.n, p.beta, outcome);
        if (!lz) return std::numeric_limits<double>::infinity();
        return -p.kT * *lz;
    };
    // Pauli capacity does not depend on lambda (mode counts are fixed), so a
    // single infeasible evaluation means there is no feasible position.
    if (!std::isfinite(free_energy_at(config.lambda)))
        throw pauli_capacity_error("equilibrium_position: outcome is infeasible");

    constexpr double kStep = 1e-3;
    constexpr double kEdge = 1e-4;
    int best = 1;
    double best_f = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 999; ++i) {
        const double f = free_energy_at(i * kStep);
        if (f < best_f) {
            best_f = f;
            best = i;
        }
    }
    EquilibriumPosition eq;
    if (best == 1 || best == 999) {
        eq.at_boundary = true;
        eq.lambda_star = best == 1 ? kEdge : 1.0 - kEdge;
        eq.free_energy = free_energy_at(eq.lambda_star);
        return eq;
    }
    // Golden-section refinement inside the bracketing grid cells.
    double a = (best - 1) * kStep;
    double b = (best + 1) * kStep;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = free_energy_at(x1);
    double f2 = free_energy_at(x2);
    while (b - a > 1e-6) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = free_energy_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = free_energy_at(x2);
        }
    }
    eq.lambda_star = 0.5 * (a + b);
    eq.free_energy = free_energy_at(eq.lambda_star);
    eq.at_boundary = false;
    return eq;
}

}  // namespace szilard
