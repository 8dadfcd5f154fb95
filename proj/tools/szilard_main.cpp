// Command-line front end for the Szilard-cycle engine.
//
// Verbs: cycle, outcomes, sweep, profile, spectrum, verify.
// Exit codes: 0 success, 1 physics or I/O failure (infeasible filling,
// uncertifiable truncation, unreadable file), 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "szilard/asymptotics.hpp"
#include "szilard/engine.hpp"
#include "szilard/verify.hpp"

namespace {

using nlohmann::json;
using namespace szilard;

std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string pad(const std::string& text, std::size_t width) {
    std::string out = text;
    if (out.size() < width) out.append(width - out.size(), ' ');
    else out.push_back(' ');
    return out;
}

void kv(std::ostream& os, const std::string& key, const std::string& value) {
    os << "  " << pad(key, 18) << value << "\n";
}

int parse_int(const std::string& text) {
    std::size_t pos = 0;
    const int value = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return value;
}

// ---------------------------------------------------------------------------
// Option bundles shared across verbs.

struct PhysicsOpts {
    std::string stat = "boson";
    int n = 1;
    double temperature = 1.0;
    double lambda = 0.5;
    int levels = 0;
    double tol = 1e-16;
    std::string spectrum_file;
};

void add_physics(CLI::App* cmd, PhysicsOpts& o) {
    cmd->add_option("--stat", o.stat, "Particle statistics")
        ->transform(CLI::IsMember({"boson", "fermion", "dist", "distinguishable"}))
        ->capture_default_str();
    cmd->add_option("-n,--particles", o.n, "Number of particles")->capture_default_str();
    cmd->add_option("-T,--temp", o.temperature, "Temperature, units of eps0/k")
        ->capture_default_str();
    cmd->add_option("-l,--lambda", o.lambda, "Barrier position in (0,1)")
        ->capture_default_str();
    cmd->add_option("--levels", o.levels,
                    "Single-particle levels per region (0 = auto-certified)")
        ->capture_default_str();
    cmd->add_option("--tol", o.tol, "Truncation tail tolerance")->capture_default_str();
    cmd->add_option("--spectrum-file", o.spectrum_file,
                    "Reference unit-width spectrum, one 'energy,degeneracy' per line");
}

EngineConfig to_config(const PhysicsOpts& o) {
    EngineConfig config;
    config.stat = parse_statistics(o.stat);
    config.n_particles = o.n;
    config.lambda = o.lambda;
    config.temperature = o.temperature;
    config.levels = o.levels;
    config.truncation_tol = o.tol;
    if (!o.spectrum_file.empty()) config.base_spectrum = load_spectrum(o.spectrum_file);
    return config;
}

struct MeasureOpts {
    std::string measure = "count";
    std::string groups;
};

void add_measure(CLI::App* cmd, MeasureOpts& o) {
    cmd->add_option("--measure", o.measure, "Measurement scheme")
        ->transform(CLI::IsMember({"trivial", "count", "coarse", "resolved"}))
        ->capture_default_str();
    cmd->add_option("--groups", o.groups,
                    "Sector partition for --measure coarse, e.g. \"0-1|2|3-4\"");
}

std::vector<std::vector<int>> parse_groups(const std::string& text) {
    std::vector<std::vector<int>> groups;
    std::stringstream group_stream(text);
    std::string group;
    while (std::getline(group_stream, group, '|')) {
        std::vector<int> members;
        std::stringstream member_stream(group);
        std::string token;
        while (std::getline(member_stream, token, ',')) {
            try {
                const std::size_t dash = token.find('-', 1);
                if (dash == std::string::npos) {
                    members.push_back(parse_int(token));
                } else {
                    const int lo = parse_int(token.substr(0, dash));
                    const int hi = parse_int(token.substr(dash + 1));
                    if (hi < lo) throw std::invalid_argument("descending range");
                    for (int v = lo; v <= hi; ++v) members.push_back(v);
                }
            } catch (const std::exception&) {
                throw std::invalid_argument("bad --groups token '" + token +
                                            "', expected e.g. \"0-1|2|3-4\"");
            }
        }
        if (members.empty()) throw std::invalid_argument("empty group in --groups");
        groups.push_back(std::move(members));
    }
    if (groups.empty()) throw std::invalid_argument("--groups is empty");
    return groups;
}

MeasurementScheme to_scheme(const MeasureOpts& o) {
    if (o.measure != "coarse" && !o.groups.empty())
        throw std::invalid_argument("--groups only applies to --measure coarse");
    if (o.measure == "trivial") return MeasurementScheme::trivial();
    if (o.measure == "count") return MeasurementScheme::count();
    if (o.measure == "resolved") return MeasurementScheme::resolved();
    if (o.groups.empty())
        throw std::invalid_argument("--measure coarse requires --groups");
    return MeasurementScheme::coarse(parse_groups(o.groups));
}

struct OutputOpts {
    std::string format = "table";
    std::string out;
};

void add_output(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--format", o.format, "Output format")
        ->transform(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Write to this file instead of stdout");
}

void emit(const std::string& text, const OutputOpts& o) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(o.out);
    if (!file) throw std::runtime_error("cannot open output file: " + o.out);
    file << text;
}

json config_json(const EngineConfig& config, const MeasurementScheme& scheme) {
    return json{{"statistics", to_string(config.stat)},
                {"particles", config.n_particles},
                {"lambda", config.lambda},
                {"temperature", config.temperature},
                {"measurement", to_string(scheme.kind)}};
}

json ledger_json(const WorkLedger& ledger) {
    return json{{"w1", ledger.w1},
                {"expected_w2", ledger.expected_w2},
                {"net_work", ledger.net_work},
                {"entropy", ledger.entropy},
                {"erasure_cost", ledger.erasure_cost},
                {"net_with_erasure", ledger.net_with_erasure}};
}

std::string join_sectors(const std::vector<int>& sectors, char sep) {
    std::string out;
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        if (i) out.push_back(sep);
        out += std::to_string(sectors[i]);
    }
    return out;
}

void describe_config(std::ostream& os, const EngineConfig& config,
                     const MeasurementScheme& scheme) {
    os << "configuration\n";
    kv(os, "statistics", to_string(config.stat));
    kv(os, "particles", std::to_string(config.n_particles));
    kv(os, "lambda", g12(config.lambda));
    kv(os, "temperature", g12(config.temperature));
    kv(os, "levels", config.levels > 0 ? std::to_string(config.levels) : "auto");
    kv(os, "measurement", to_string(scheme.kind));
}

// ---------------------------------------------------------------------------
// cycle: one full run, whole ledger.

int cmd_cycle(const PhysicsOpts& po, const MeasureOpts& mo, const OutputOpts& oo) {
    const EngineConfig config = to_config(po);
    const MeasurementScheme scheme = to_scheme(mo);
    const CycleResult result = run_cycle(config, scheme);
    const WorkLedger& ledger = result.ledger;
    std::ostringstream os;
    if (oo.format == "json") {
        json j;
        j["config"] = config_json(config, scheme);
        json outs = json::array();
        for (std::size_t m = 0; m < result.distribution.outcomes.size(); ++m) {
            const Outcome& out = result.distribution.outcomes[m];
            outs.push_back({{"label", out.label},
                            {"probability", out.probability},
                            {"sectors", out.sectors},
                            {"w2", ledger.w2[m]}});
        }
        j["outcomes"] = outs;
        j["ledger"] = ledger_json(ledger);
        os << j.dump(2) << "\n";
    } else if (oo.format == "csv") {
        os << "stat,n,lambda,temperature,measure,w1,expected_w2,net_work,entropy,"
              "erasure_cost,net_with_erasure\n"
           << to_string(config.stat) << ',' << config.n_particles << ','
           << g12(config.lambda) << ',' << g12(config.temperature) << ','
           << to_string(scheme.kind) << ',' << g12(ledger.w1) << ','
           << g12(ledger.expected_w2) << ',' << g12(ledger.net_work) << ','
           << g12(ledger.entropy) << ',' << g12(ledger.erasure_cost) << ','
           << g12(ledger.net_with_erasure) << "\n";
    } else {
        describe_config(os, config, scheme);
        os << "\noutcomes\n  " << pad("label", 12) << pad("probability", 20) << "W2\n";
        for (std::size_t m = 0; m < result.distribution.outcomes.size(); ++m) {
            const Outcome& out = result.distribution.outcomes[m];
            os << "  " << pad(out.label, 12) << pad(g12(out.probability), 20)
               << g12(ledger.w2[m]) << "\n";
        }
        os << "\nledger (work extracted, erasure at the measurement temperature)\n";
        kv(os, "W1 insertion", g12(ledger.w1));
        kv(os, "E[W2] extraction", g12(ledger.expected_w2));
        kv(os, "net work", g12(ledger.net_work));
        kv(os, "entropy (nats)", g12(ledger.entropy));
        kv(os, "erasure cost", g12(ledger.erasure_cost));
        kv(os, "net with erasure", g12(ledger.net_with_erasure));
    }
    emit(os.str(), oo);
    return 0;
}

// ---------------------------------------------------------------------------
// outcomes: the measurement distribution in detail.

int cmd_outcomes(const PhysicsOpts& po, const MeasureOpts& mo, const OutputOpts& oo) {
    const EngineConfig config = to_config(po);
    const MeasurementScheme scheme = to_scheme(mo);
    const CycleResult result = run_cycle(config, scheme);
    std::ostringstream os;
    if (oo.format == "json") {
        json j;
        j["config"] = config_json(config, scheme);
        json outs = json::array();
        for (std::size_t m = 0; m < result.distribution.outcomes.size(); ++m) {
            const Outcome& out = result.distribution.outcomes[m];
            outs.push_back({{"label", out.label},
                            {"probability", out.probability},
                            {"sectors", out.sectors},
                            {"log_weight", out.weight.log()},
                            {"w2", result.ledger.w2[m]}});
        }
        j["outcomes"] = outs;
        j["information_gain"] = information_gain(result.distribution);
        os << j.dump(2) << "\n";
    } else if (oo.format == "csv") {
        os << "label,probability,w2,sectors\n";
        for (std::size_t m = 0; m < result.distribution.outcomes.size(); ++m) {
            const Outcome& out = result.distribution.outcomes[m];
            os << '"' << out.label << "\"," << g12(out.probability) << ','
               << g12(result.ledger.w2[m]) << ",\"" << join_sectors(out.sectors, ';')
               << "\"\n";
        }
    } else {
        describe_config(os, config, scheme);
        os << "\n  " << pad("label", 12) << pad("probability", 20) << pad("W2", 20)
           << "sectors\n";
        for (std::size_t m = 0; m < result.distribution.outcomes.size(); ++m) {
            const Outcome& out = result.distribution.outcomes[m];
            os << "  " << pad(out.label, 12) << pad(g12(out.probability), 20)
               << pad(g12(result.ledger.w2[m]), 20) << join_sectors(out.sectors, ' ')
               << "\n";
        }
        os << "\n";
        kv(os, "information (nats)", g12(information_gain(result.distribution)));
    }
    emit(os.str(), oo);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep: the ledger along one axis, optionally in parallel.

struct SweepOpts {
    std::string axis;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    std::string scale = "linear";
    int jobs = 1;
};

std::vector<double> sweep_grid(const SweepOpts& so) {
    std::vector<double> grid;
    if (so.axis == "n") {
        const long long lo = std::llround(so.start), hi = std::llround(so.stop);
        for (long long v = lo; v <= hi; ++v) grid.push_back(static_cast<double>(v));
    } else if (so.count < 1) {
        throw std::invalid_argument("--count must be at least 1");
    } else if (so.count == 1) {
        grid.push_back(so.start);
    } else if (so.scale == "log") {
        if (so.start <= 0.0 || so.stop <= 0.0)
            throw std::invalid_argument("--scale log requires positive endpoints");
        const double la = std::log(so.start), lb = std::log(so.stop);
        for (int i = 0; i < so.count; ++i)
            grid.push_back(std::exp(la + (lb - la) * i / (so.count - 1)));
    } else {
        for (int i = 0; i < so.count; ++i)
            grid.push_back(so.start + (so.stop - so.start) * i / (so.count - 1));
    }
    if (grid.empty()) throw std::invalid_argument("empty sweep range");
    return grid;
}

int cmd_sweep(const PhysicsOpts& po, const MeasureOpts& mo, const SweepOpts& so,
              const OutputOpts& oo) {
    const EngineConfig base = to_config(po);
    const MeasurementScheme scheme = to_scheme(mo);
    const std::vector<double> grid = sweep_grid(so);
    const auto at = [&](double value) {
        EngineConfig config = base;
        if (so.axis == "temp") config.temperature = value;
        else if (so.axis == "lambda") config.lambda = value;
        else config.n_particles = static_cast<int>(std::llround(value));
        return run_cycle(config, scheme).ledger;
    };

    std::vector<WorkLedger> ledgers(grid.size());
    const std::size_t jobs = static_cast<std::size_t>(std::max(1, so.jobs));
    if (jobs == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) ledgers[i] = at(grid[i]);
    } else {
        // Waves of `jobs` async tasks; results land in order, so the output
        // is byte-identical to a serial run.
        for (std::size_t begin = 0; begin < grid.size(); begin += jobs) {
            const std::size_t end = std::min(grid.size(), begin + jobs);
            std::vector<std::future<WorkLedger>> wave;
            for (std::size_t i = begin; i < end; ++i)
                wave.push_back(std::async(std::launch::async, at, grid[i]));
            for (std::size_t i = begin; i < end; ++i)
                ledgers[i] = wave[i - begin].get();
        }
    }

    const std::string axis_name = so.axis == "temp" ? "temperature" : so.axis;
    std::ostringstream os;
    if (oo.format == "json") {
        json points = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            json row = ledger_json(ledgers[i]);
            row[axis_name] = grid[i];
            points.push_back(row);
        }
        json j;
        j["config"] = config_json(base, scheme);
        j["axis"] = axis_name;
        j["points"] = points;
        os << j.dump(2) << "\n";
    } else if (oo.format == "csv") {
        os << axis_name << ",w1,expected_w2,net_work,entropy,erasure_cost,"
              "net_with_erasure\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const WorkLedger& l = ledgers[i];
            os << g12(grid[i]) << ',' << g12(l.w1) << ',' << g12(l.expected_w2) << ','
               << g12(l.net_work) << ',' << g12(l.entropy) << ','
               << g12(l.erasure_cost) << ',' << g12(l.net_with_erasure) << "\n";
        }
    } else {
        os << "  " << pad(axis_name, 14) << pad("W1", 18) << pad("E[W2]", 18)
           << pad("net", 18) << pad("entropy", 18) << "net+erasure\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const WorkLedger& l = ledgers[i];
            os << "  " << pad(g12(grid[i]), 14) << pad(g12(l.w1), 18)
               << pad(g12(l.expected_w2), 18) << pad(g12(l.net_work), 18)
               << pad(g12(l.entropy), 18) << g12(l.net_with_erasure) << "\n";
        }
    }
    emit(os.str(), oo);
    return 0;
}

// ---------------------------------------------------------------------------
// profile: free energy and barrier force versus lambda for one outcome.

const Outcome& select_outcome(const OutcomeDistribution& distribution,
                              const std::string& key) {
    bool numeric = !key.empty();
    for (char c : key) numeric = numeric && (c >= '0' && c <= '9');
    if (numeric) {
        const int index = parse_int(key);
        if (index < 0 || index >= static_cast<int>(distribution.outcomes.size()))
            throw std::invalid_argument(
                "outcome index " + key + " out of range (" +
                std::to_string(distribution.outcomes.size()) + " outcomes)");
        return distribution.outcomes[static_cast<std::size_t>(index)];
    }
    for (const Outcome& out : distribution.outcomes)
        if (out.label == key) return out;
    throw std::invalid_argument("no outcome labeled '" + key + "'");
}

struct ProfileOpts {
    std::string outcome = "0";
    double grid_start = 0.05;
    double grid_stop = 0.95;
    int grid_count = 19;
};

int cmd_profile(const PhysicsOpts& po, const MeasureOpts& mo, const ProfileOpts& fo,
                const OutputOpts& oo) {
    const EngineConfig config = to_config(po);
    const MeasurementScheme scheme = to_scheme(mo);
    const OutcomeDistribution distribution = measure(config, scheme);
    const Outcome& outcome = select_outcome(distribution, fo.outcome);
    if (fo.grid_count < 1) throw std::invalid_argument("--grid-count must be >= 1");
    std::vector<double> grid;
    for (int i = 0; i < fo.grid_count; ++i)
        grid.push_back(fo.grid_count == 1
                           ? fo.grid_start
                           : fo.grid_start + (fo.grid_stop - fo.grid_start) * i /
                                                 (fo.grid_count - 1));
    const std::vector<ForceProfilePoint> points =
        free_energy_profile(config, outcome, grid);
    const EquilibriumPosition eq = equilibrium_position(config, outcome);

    std::ostringstream os;
    if (oo.format == "json") {
        json rows = json::array();
        for (const ForceProfilePoint& p : points)
            rows.push_back({{"lambda", p.lambda},
                            {"free_energy", p.free_energy},
                            {"force", p.force},
                            {"feasible", p.feasible}});
        json j;
        j["config"] = config_json(config, scheme);
        j["outcome"] = outcome.label;
        j["probability"] = outcome.probability;
        j["points"] = rows;
        j["equilibrium"] = {{"lambda_star", eq.lambda_star},
                            {"free_energy", eq.free_energy},
                            {"at_boundary", eq.at_boundary}};
        os << j.dump(2) << "\n";
    } else if (oo.format == "csv") {
        os << "lambda,free_energy,force,feasible\n";
        for (const ForceProfilePoint& p : points)
            os << g12(p.lambda) << ',' << g12(p.free_energy) << ',' << g12(p.force)
               << ',' << (p.feasible ? 1 : 0) << "\n";
    } else {
        describe_config(os, config, scheme);
        os << "\nprofile for outcome \"" << outcome.label << "\" (probability "
           << g12(outcome.probability) << ")\n";
        os << "  " << pad("lambda", 14) << pad("F(lambda)", 20) << pad("force", 20)
           << "feasible\n";
        for (const ForceProfilePoint& p : points)
            os << "  " << pad(g12(p.lambda), 14) << pad(g12(p.free_energy), 20)
               << pad(g12(p.force), 20) << (p.feasible ? "yes" : "no") << "\n";
        os << "\nequilibrium\n";
        kv(os, "lambda*", g12(eq.lambda_star));
        kv(os, "F(lambda*)", g12(eq.free_energy));
        kv(os, "at boundary", eq.at_boundary ? "yes" : "no");
    }
    emit(os.str(), oo);
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum: the canonical reference levels and the certified truncation order.

int certified_box_order(double beta, int n, double tol) {
    for (int k = std::max(n + 10, 16); k <= (1 << 22); k *= 2) {
        try {
            return truncation_order(box_spectrum(1.0, k), beta, n, tol);
        } catch (const insufficient_levels_error&) {
        }
    }
    throw insufficient_levels_error("cannot certify the requested tail tolerance");
}

int cmd_spectrum(const PhysicsOpts& po, bool want_order, const OutputOpts& oo) {
    const bool from_file = !po.spectrum_file.empty();
    Spectrum base;
    if (from_file) {
        base = load_spectrum(po.spectrum_file);
    } else {
        base = box_spectrum(1.0, po.levels > 0 ? po.levels : 10);
    }

    int order = 0;
    if (want_order) {
        if (po.temperature <= 0.0)
            throw std::invalid_argument("--temp must be positive");
        const double beta = 1.0 / po.temperature;
        if (from_file || po.levels > 0) {
            order = truncation_order(base, beta, po.n, po.tol);
        } else {
            order = certified_box_order(beta, po.n, po.tol);
            base = box_spectrum(1.0, order);  // show exactly what the engine uses
        }
    }

    std::ostringstream os;
    if (oo.format == "json") {
        json levels = json::array();
        for (const Level& level : base.levels)
            levels.push_back({{"energy", level.energy}, {"degeneracy", level.degeneracy}});
        json j;
        j["source"] = from_file ? po.spectrum_file : "box";
        j["levels"] = levels;
        if (want_order) {
            j["truncation_order"] = order;
            j["temperature"] = po.temperature;
            j["particles"] = po.n;
            j["tol"] = po.tol;
        }
        os << j.dump(2) << "\n";
    } else if (oo.format == "csv") {
        // Bare energy,degeneracy lines: valid --spectrum-file input.
        for (const Level& level : base.levels)
            os << g12(level.energy) << ',' << level.degeneracy << "\n";
    } else {
        os << "reference spectrum (unit width"
           << (from_file ? ", from " + po.spectrum_file : ", particle in a box") << ")\n";
        os << "  " << pad("index", 8) << pad("energy", 20) << "degeneracy\n";
        for (std::size_t i = 0; i < base.levels.size(); ++i)
            os << "  " << pad(std::to_string(i + 1), 8)
               << pad(g12(base.levels[i].energy), 20) << base.levels[i].degeneracy
               << "\n";
        if (want_order)
            os << "\ntruncation: " << order << " levels certify tail <= " << g12(po.tol)
               << " at T = " << g12(po.temperature) << " for N = " << po.n << "\n";
    }
    emit(os.str(), oo);
    return 0;
}

// ---------------------------------------------------------------------------
// verify: the full self-check suite.

int cmd_verify(bool quick, std::uint64_t seed, const OutputOpts& oo) {
    verify::Options options;
    options.quick = quick;
    options.seed = seed;
    const std::vector<verify::CheckResult> results = verify::run_all(options);
    std::ostringstream os;
    bool all_pass = true;
    for (const verify::CheckResult& r : results) {
        char line[512];
        std::snprintf(line, sizeof line, "%s  %-24s %s [%.2fs]",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                      r.seconds);
        os << line << "\n";
        all_pass = all_pass && r.pass;
    }
    os << (all_pass ? "all checks passed\n" : "some checks FAILED\n");
    emit(os.str(), oo);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact canonical-ensemble work ledgers for the multi-particle Szilard "
        "engine (bosons, fermions, distinguishable particles)"};
    app.require_subcommand(1);

    PhysicsOpts po;
    MeasureOpts mo;
    OutputOpts oo;
    SweepOpts so;
    ProfileOpts fo;
    bool quick = false;
    std::uint64_t seed = 12345;

    CLI::App* cycle = app.add_subcommand("cycle", "Run one cycle and print the ledger");
    add_physics(cycle, po);
    add_measure(cycle, mo);
    add_output(cycle, oo);

    CLI::App* outcomes =
        app.add_subcommand("outcomes", "Print the measurement outcome distribution");
    add_physics(outcomes, po);
    add_measure(outcomes, mo);
    add_output(outcomes, oo);

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep the ledger along one axis");
    add_physics(sweep, po);
    add_measure(sweep, mo);
    add_output(sweep, oo);
    sweep->add_option("--axis", so.axis, "Axis to sweep")
        ->transform(CLI::IsMember({"temp", "lambda", "n"}))
        ->required();
    sweep->add_option("--start", so.start, "First axis value")->required();
    sweep->add_option("--stop", so.stop, "Last axis value")->required();
    sweep->add_option("--count", so.count, "Number of points (ignored for --axis n)");
    sweep->add_option("--scale", so.scale, "Grid spacing")
        ->transform(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    sweep->add_option("--jobs", so.jobs, "Parallel workers")->capture_default_str();

    CLI::App* profile = app.add_subcommand(
        "profile", "Free energy and barrier force versus lambda for one outcome");
    add_physics(profile, po);
    add_measure(profile, mo);
    add_output(profile, oo);
    profile->add_option("--outcome", fo.outcome, "Outcome index or label")
        ->capture_default_str();
    profile->add_option("--grid-start", fo.grid_start, "First lambda")
        ->capture_default_str();
    profile->add_option("--grid-stop", fo.grid_stop, "Last lambda")
        ->capture_default_str();
    profile->add_option("--grid-count", fo.grid_count, "Number of lambda points")
        ->capture_default_str();

    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Print the canonical reference spectrum and truncation order");
    add_physics(spectrum, po);
    add_output(spectrum, oo);

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run the self-check suite (plain text)");
    verify_cmd->add_flag("--quick", quick, "Reduced sample counts");
    verify_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    verify_cmd->add_option("--out", oo.out, "Write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cycle)) return cmd_cycle(po, mo, oo);
        if (app.got_subcommand(outcomes)) return cmd_outcomes(po, mo, oo);
        if (app.got_subcommand(sweep)) return cmd_sweep(po, mo, so, oo);
        if (app.got_subcommand(profile)) return cmd_profile(po, mo, fo, oo);
        if (app.got_subcommand(spectrum))
            return cmd_spectrum(po, spectrum->count("--temp") > 0, oo);
        if (app.got_subcommand(verify_cmd)) return cmd_verify(quick, seed, oo);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
