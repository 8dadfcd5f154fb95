#include "szilard/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace szilard {

namespace {

bool nearly_equal(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

long long Spectrum::total_modes() const {
    long long modes = 0;
    for (const Level& level : levels) modes += level.degeneracy;
    return modes;
}

Spectrum make_spectrum(std::vector<Level> levels, double merge_tol) {
    if (levels.empty()) throw std::invalid_argument("spectrum: no levels");
    for (const Level& level : levels) {
        if (!std::isfinite(level.energy))
            throw std::invalid_argument("spectrum: non-finite energy");
        if (level.degeneracy < 1)
            throw std::invalid_argument("spectrum: degeneracy must be >= 1");
    }
    std::stable_sort(levels.begin(), levels.end(),
                     [](const Level& a, const Level& b) { return a.energy < b.energy; });
    Spectrum out;
    out.levels.reserve(levels.size());
    for (const Level& level : levels) {
        if (!out.levels.empty() && nearly_equal(out.levels.back().energy, level.energy, merge_tol))
            out.levels.back().degeneracy += level.degeneracy;
        else
            out.levels.push_back(level);
    }
    return out;
}

Spectrum box_spectrum(double width, int k) {
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("box_spectrum: width must be positive");
    if (k < 1) throw std::invalid_argument("box_spectrum: need at least one level");
    // One shared reciprocal keeps the width^-2 scaling property bit-exact:
    // energy(n) == n^2 * scale for every width.
    const double scale = 1.0 / (width * width);
    Spectrum out;
    out.levels.reserve(static_cast<std::size_t>(k));
    for (int n = 1; n <= k; ++n)
        out.levels.push_back({static_cast<double>(n) * n * scale, 1});
    return out;
}

Spectrum scale_spectrum(const Spectrum& base, double width) {
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("scale_spectrum: width must be positive");
    const double scale = 1.0 / (width * width);
    Spectrum out = base;
    for (Level& level : out.levels) level.energy *= scale;
    return out;
}

SplitSpectrum split_box(double lambda, int k) {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::invalid_argument("split_box: lambda must lie in (0,1)");
    return {box_spectrum(lambda, k), box_spectrum(1.0 - lambda, k), lambda};
}

SplitSpectrum split_spectrum(const Spectrum& base, double lambda) {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::invalid_argument("split_spectrum: lambda must lie in (0,1)");
    return {scale_spectrum(base, lambda), scale_spectrum(base, 1.0 - lambda), lambda};
}

std::vector<TaggedMode> tagged_modes(const SplitSpectrum& split, int max_modes) {
    std::vector<TaggedMode> modes;
    modes.reserve(static_cast<std::size_t>(std::max(max_modes, 0)));
    // Merge by energy, left before right on ties, until max_modes entries.
    std::size_t il = 0, ir = 0;
    int dl = 0, dr = 0;  // modes already taken from the current level
    while (static_cast<int>(modes.size()) < max_modes) {
        const bool left_ok = il < split.left.levels.size();
        const bool right_ok = ir < split.right.levels.size();
        if (!left_ok && !right_ok) break;
        bool take_left;
        if (!right_ok)
            take_left = true;
        else if (!left_ok)
            take_left = false;
        else
            take_left = split.left.levels[il].energy <= split.right.levels[ir].energy;
        if (take_left) {
            modes.push_back({split.left.levels[il].energy, Side::Left});
            if (++dl == split.left.levels[il].degeneracy) { ++il; dl = 0; }
        } else {
            modes.push_back({split.right.levels[ir].energy, Side::Right});
            if (++dr == split.right.levels[ir].degeneracy) { ++ir; dr = 0; }
        }
    }
    return modes;
}

std::vector<double> mode_energies(const Spectrum& spectrum, int max_modes) {
    std::vector<double> modes;
    modes.reserve(static_cast<std::size_t>(std::max(max_modes, 0)));
    for (const Level& level : spectrum.levels) {
        for (int d = 0; d < level.degeneracy; ++d) {
            if (static_cast<int>(modes.size()) >= max_modes) return modes;
            modes.push_back(level.energy);
        }
    }
    return modes;
}

int truncation_order(const Spectrum& spectrum, double beta, int n_particles, double tol) {
    if (!(beta > 0.0)) throw std::invalid_argument("truncation_order: beta must be positive");
    if (!(tol > 0.0) || !(tol < 1.0))
        throw std::invalid_argument("truncation_order: tol must lie in (0,1)");
    if (n_particles < 0) throw std::invalid_argument("truncation_order: negative particle count");
    const int floor_k = n_particles + 10;
    const double ground = spectrum.ground_energy();
    for (int k = floor_k; k <= spectrum.size(); ++k) {
        const Level& level = spectrum.levels[static_cast<std::size_t>(k - 1)];
        const double tail = level.degeneracy * std::exp(-beta * (level.energy - ground));
        if (tail <= tol) return k;
    }
    std::ostringstream msg;
    msg << "truncation_order: insufficient levels (" << spectrum.size()
        << ") to certify tail bound " << tol << " at beta " << beta << " with "
        << n_particles << " particles";
    throw insufficient_levels_error(msg.str());
}

namespace {

[[noreturn]] void parse_fail(const std::string& name, int line_no, const std::string& why) {
    std::ostringstream msg;
    msg << name << ":" << line_no << ": " << why;
    throw std::invalid_argument(msg.str());
}

}  // namespace

Spectrum parse_spectrum(std::istream& in, const std::string& name) {
    std::vector<Level> levels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // Trim whitespace; skip blank lines.
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const auto comma = line.find(',');
        if (comma == std::string::npos)
            parse_fail(name, line_no, "expected 'energy,degeneracy'");
        double energy = 0.0;
        long degeneracy = 0;
        std::size_t used = 0;
        try {
            energy = std::stod(line.substr(0, comma), &used);
        } catch (const std::exception&) {
            parse_fail(name, line_no, "bad energy value");
        }
        if (line.substr(0, comma).find_first_not_of(" \t", used) != std::string::npos)
            parse_fail(name, line_no, "trailing characters after energy");
        const std::string deg_text = line.substr(comma + 1);
        try {
            degeneracy = std::stol(deg_text, &used);
        } catch (const std::exception&) {
            parse_fail(name, line_no, "bad degeneracy value");
        }
        if (deg_text.find_first_not_of(" \t", used) != std::string::npos)
            parse_fail(name, line_no, "trailing characters after degeneracy");
        if (!std::isfinite(energy)) parse_fail(name, line_no, "non-finite energy");
        if (degeneracy < 1) parse_fail(name, line_no, "degeneracy must be a positive integer");
        levels.push_back({energy, static_cast<int>(degeneracy)});
    }
    if (levels.empty())
        throw std::invalid_argument(name + ": no levels found");
    return make_spectrum(std::move(levels));
}

Spectrum load_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_spectrum: cannot open " + path);
    return parse_spectrum(in, path);
}

}  // namespace szilard
