#include "mlamatch/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mlamatch/constants.hpp"
#include "mlamatch/sweep.hpp"  // format_double

namespace mlamatch {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_double_token(std::string_view token, const std::string& where) {
    double value = 0.0;
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw ConfigError(where + ": not a number: '" + std::string(token) + "'");
    return value;
}

template <typename Int>
Int parse_int_token(std::string_view token, const std::string& where) {
    Int value = 0;
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(where + ": not an integer: '" + std::string(token) + "'");
    return value;
}

/// key -> (raw value, line number); getters mark keys consumed so anything
/// left over is reported as unknown.
class KeyTable {
public:
    KeyTable(std::string_view text, std::string source)
        : source_(std::move(source)) {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto eol = text.find('\n', pos);
            std::string_view line = text.substr(
                pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
            pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError(at(line_no) + "expected 'key = value', got '" +
                                  std::string(line) + "'");
            const std::string key{trim(line.substr(0, eq))};
            const std::string value{trim(line.substr(eq + 1))};
            if (key.empty()) throw ConfigError(at(line_no) + "empty key");
            if (!entries_.emplace(key, Entry{value, line_no, false}).second)
                throw ConfigError(at(line_no) + "duplicate key " + key);
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key) {
        Entry& e = lookup(key);
        if (e.value.empty()) throw ConfigError(where(key) + ": empty value");
        return e.value;
    }

    double get_double(const std::string& key) {
        Entry& e = lookup(key);
        return parse_double_token(e.value, where(key));
    }

    int get_int(const std::string& key) {
        Entry& e = lookup(key);
        return parse_int_token<int>(e.value, where(key));
    }

    std::uint64_t get_u64(const std::string& key) {
        Entry& e = lookup(key);
        return parse_int_token<std::uint64_t>(e.value, where(key));
    }

    bool get_bool(const std::string& key) {
        Entry& e = lookup(key);
        if (e.value == "true") return true;
        if (e.value == "false") return false;
        throw ConfigError(where(key) + ": expected true or false, got '" + e.value +
                          "'");
    }

    std::vector<double> get_double_list(const std::string& key, std::size_t count) {
        Entry& e = lookup(key);
        std::vector<double> values;
        std::string_view rest = e.value;
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_double_token(
                trim(rest.substr(0, comma)), where(key)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (values.size() != count)
            throw ConfigError(where(key) + ": expected " + std::to_string(count) +
                              " comma-separated values, got " +
                              std::to_string(values.size()));
        return values;
    }

    std::vector<int> get_int_list(const std::string& key) {
        Entry& e = lookup(key);
        std::vector<int> values;
        std::string_view rest = e.value;
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(
                parse_int_token<int>(trim(rest.substr(0, comma)), where(key)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return values;
    }

    std::string where(const std::string& key) const {
        const auto it = entries_.find(key);
        return at(it->second.line) + key;
    }

    void reject_unused() const {
        for (const auto& [key, e] : entries_)
            if (!e.used) throw ConfigError(at(e.line) + "unknown key " + key);
    }

    const std::string& source() const { return source_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
        bool used = false;
    };

    std::string at(int line_no) const {
        return source_ + ":" + std::to_string(line_no) + ": ";
    }

    Entry& lookup(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(source_ + ": missing key " + key);
        it->second.used = true;
        return it->second;
    }

    std::string source_;
    std::map<std::string, Entry> entries_;
};

void require_positive(double v, const std::string& name) {
    if (!(v > 0.0)) throw ConfigError(name + " must be positive");
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source_name) {
    KeyTable keys(text, source_name);
    RunConfig cfg;

    // antenna.* — eps_r deliberately has no default; the source geometry is
    // meaningless without it.
    for (const char* key : {"antenna.a_mm", "antenna.b_mm", "antenna.eps_r"})
        if (!keys.has(key))
            throw ConfigError(source_name + ": missing mandatory key " +
                              std::string(key));
    cfg.a_mm = keys.get_double("antenna.a_mm");
    cfg.b_mm = keys.get_double("antenna.b_mm");
    cfg.eps_r = keys.get_double("antenna.eps_r");
    if (keys.has("antenna.tan_delta"))
        cfg.tan_delta = keys.get_double("antenna.tan_delta");
    require_positive(cfg.a_mm, "antenna.a_mm");
    require_positive(cfg.b_mm, "antenna.b_mm");
    if (!(cfg.eps_r >= 1.0)) throw ConfigError("antenna.eps_r must be at least 1");
    if (cfg.tan_delta < 0.0)
        throw ConfigError("antenna.tan_delta must be nonnegative");

    // band.* — start/stop or center/span, never a mix of the two forms
    const bool has_edges = keys.has("band.start_ghz") || keys.has("band.stop_ghz");
    const bool has_center = keys.has("band.center_ghz") || keys.has("band.span_ghz");
    if (has_edges && has_center)
        throw ConfigError(source_name +
                          ": give either band.start_ghz/band.stop_ghz or "
                          "band.center_ghz/band.span_ghz, not both");
    if (has_edges) {
        if (!keys.has("band.start_ghz") || !keys.has("band.stop_ghz"))
            throw ConfigError(source_name +
                              ": band.start_ghz and band.stop_ghz must be given "
                              "together");
        cfg.f_start_ghz = keys.get_double("band.start_ghz");
        cfg.f_stop_ghz = keys.get_double("band.stop_ghz");
    } else if (has_center) {
        if (!keys.has("band.center_ghz") || !keys.has("band.span_ghz"))
            throw ConfigError(source_name +
                              ": band.center_ghz and band.span_ghz must be given "
                              "together");
        const double center = keys.get_double("band.center_ghz");
        const double span = keys.get_double("band.span_ghz");
        require_positive(span, "band.span_ghz");
        cfg.f_start_ghz = center - span / 2.0;
        cfg.f_stop_ghz = center + span / 2.0;
    } else {
        throw ConfigError(source_name +
                          ": missing mandatory band keys (band.start_ghz/"
                          "band.stop_ghz or band.center_ghz/band.span_ghz)");
    }
    require_positive(cfg.f_start_ghz, "band start");
    if (!(cfg.f_stop_ghz > cfg.f_start_ghz))
        throw ConfigError("band stop must exceed band start");
    if (keys.has("band.n_points")) cfg.n_points = keys.get_int("band.n_points");
    if (cfg.n_points < 2) throw ConfigError("band.n_points must be at least 2");

    // the whole band must propagate in the feed guide
    const double te10_cutoff_hz = cutoff_frequency(antenna_section(cfg), 1);
    if (!(cfg.f_start_ghz * 1e9 > te10_cutoff_hz)) {
        std::ostringstream msg;
        msg << "band start " << cfg.f_start_ghz
            << " GHz does not clear the feed TE10 cutoff ("
            << te10_cutoff_hz / 1e9 << " GHz)";
        throw ConfigError(msg.str());
    }

    // modes.list
    if (keys.has("modes.list")) cfg.modes = keys.get_int_list("modes.list");
    try {
        validate(ModeSet{cfg.modes});
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("modes.list: ") + err.what());
    }

    // quadrature.*
    if (keys.has("quadrature.nodes_visible"))
        cfg.nodes_visible = keys.get_int("quadrature.nodes_visible");
    if (keys.has("quadrature.nodes_evanescent"))
        cfg.nodes_evanescent = keys.get_int("quadrature.nodes_evanescent");
    if (keys.has("quadrature.k_rho_max"))
        cfg.k_rho_max = keys.get_double("quadrature.k_rho_max");
    if (keys.has("quadrature.rel_tol"))
        cfg.rel_tol = keys.get_double("quadrature.rel_tol");
    try {
        validate(quadrature_spec(cfg));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("quadrature: ") + err.what());
    }

    // bounds.* — height range defaults to (1 mm, feed height]
    if (keys.has("bounds.length_min_mm"))
        cfg.length_min_mm = keys.get_double("bounds.length_min_mm");
    if (keys.has("bounds.length_max_mm"))
        cfg.length_max_mm = keys.get_double("bounds.length_max_mm");
    if (keys.has("bounds.height_min_mm"))
        cfg.height_min_mm = keys.get_double("bounds.height_min_mm");
    cfg.height_max_mm = keys.has("bounds.height_max_mm")
                            ? keys.get_double("bounds.height_max_mm")
                            : cfg.b_mm;
    if (cfg.length_min_mm < 0.0)
        throw ConfigError("bounds.length_min_mm must be nonnegative");
    if (!(cfg.length_max_mm > cfg.length_min_mm))
        throw ConfigError("bounds.length_max_mm must exceed bounds.length_min_mm");
    require_positive(cfg.height_min_mm, "bounds.height_min_mm");
    if (!(cfg.height_max_mm > cfg.height_min_mm))
        throw ConfigError("bounds.height_max_mm must exceed bounds.height_min_mm");
    if (cfg.height_max_mm > cfg.b_mm)
        throw ConfigError("bounds.height_max_mm cannot exceed antenna.b_mm");

    // ga.*
    if (keys.has("ga.population")) cfg.ga.population_m = keys.get_int("ga.population");
    if (keys.has("ga.generations"))
        cfg.ga.generations_max = keys.get_int("ga.generations");
    if (keys.has("ga.crossover_rate"))
        cfg.ga.crossover_rate = keys.get_double("ga.crossover_rate");
    if (keys.has("ga.mutation_rate"))
        cfg.ga.mutation_rate = keys.get_double("ga.mutation_rate");
    if (keys.has("ga.elite_count")) cfg.ga.elite_count = keys.get_int("ga.elite_count");
    if (keys.has("ga.tournament_size"))
        cfg.ga.tournament_size = keys.get_int("ga.tournament_size");
    if (keys.has("ga.seed")) cfg.ga.seed = keys.get_u64("ga.seed");
    if (keys.has("ga.stagnation_window"))
        cfg.ga.stagnation_window = keys.get_int("ga.stagnation_window");
    try {
        validate(cfg.ga);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("ga: ") + err.what());
    }
    if (keys.has("ga.aggregator")) {
        const std::string agg = keys.get_string("ga.aggregator");
        if (agg == "minimax")
            cfg.aggregator = Aggregator::minimax;
        else if (agg == "mean")
            cfg.aggregator = Aggregator::mean;
        else
            throw ConfigError("ga.aggregator must be minimax or mean, got '" + agg +
                              "'");
    }
    if (keys.has("ga.gray_code")) cfg.gray_code = keys.get_bool("ga.gray_code");

    // network.*
    if (keys.has("network.step_susceptance"))
        cfg.step_susceptance = keys.get_bool("network.step_susceptance");

    // matching.* — both lists or neither
    const bool has_l = keys.has("matching.l_mm");
    const bool has_b = keys.has("matching.b_mm");
    if (has_l != has_b)
        throw ConfigError(source_name +
                          ": matching.l_mm and matching.b_mm must be given together");
    if (has_l) {
        const auto l = keys.get_double_list("matching.l_mm", 5);
        const auto b = keys.get_double_list("matching.b_mm", 3);
        std::array<double, 5> la{};
        std::array<double, 3> ba{};
        std::copy(l.begin(), l.end(), la.begin());
        std::copy(b.begin(), b.end(), ba.begin());
        for (double v : la)
            if (v < 0.0) throw ConfigError("matching.l_mm entries must be nonnegative");
        for (double v : ba) {
            require_positive(v, "matching.b_mm entries");
            if (v > cfg.b_mm)
                throw ConfigError("matching.b_mm entries cannot exceed antenna.b_mm");
        }
        cfg.matching_l_mm = la;
        cfg.matching_b_mm = ba;
    }

    // output.*
    if (keys.has("output.z_ref_ohm")) {
        cfg.z_ref_ohm = keys.get_double("output.z_ref_ohm");
        require_positive(*cfg.z_ref_ohm, "output.z_ref_ohm");
    }
    if (keys.has("output.dir")) cfg.output_dir = keys.get_string("output.dir");

    keys.reject_unused();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    const auto line = [&out](const char* key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    const auto num = [&line](const char* key, double v) { line(key, format_double(v)); };

    num("antenna.a_mm", cfg.a_mm);
    num("antenna.b_mm", cfg.b_mm);
    num("antenna.eps_r", cfg.eps_r);
    num("antenna.tan_delta", cfg.tan_delta);
    num("band.start_ghz", cfg.f_start_ghz);
    num("band.stop_ghz", cfg.f_stop_ghz);
    line("band.n_points", std::to_string(cfg.n_points));
    {
        std::string joined;
        for (std::size_t i = 0; i < cfg.modes.size(); ++i)
            joined += (i ? "," : "") + std::to_string(cfg.modes[i]);
        line("modes.list", joined);
    }
    line("quadrature.nodes_visible", std::to_string(cfg.nodes_visible));
    line("quadrature.nodes_evanescent", std::to_string(cfg.nodes_evanescent));
    num("quadrature.k_rho_max", cfg.k_rho_max);
    num("quadrature.rel_tol", cfg.rel_tol);
    num("bounds.length_min_mm", cfg.length_min_mm);
    num("bounds.length_max_mm", cfg.length_max_mm);
    num("bounds.height_min_mm", cfg.height_min_mm);
    num("bounds.height_max_mm", cfg.height_max_mm);
    line("ga.population", std::to_string(cfg.ga.population_m));
    line("ga.generations", std::to_string(cfg.ga.generations_max));
    num("ga.crossover_rate", cfg.ga.crossover_rate);
    num("ga.mutation_rate", cfg.ga.mutation_rate);
    line("ga.elite_count", std::to_string(cfg.ga.elite_count));
    line("ga.tournament_size", std::to_string(cfg.ga.tournament_size));
    line("ga.seed", std::to_string(cfg.ga.seed));
    line("ga.stagnation_window", std::to_string(cfg.ga.stagnation_window));
    line("ga.aggregator",
         cfg.aggregator == Aggregator::minimax ? "minimax" : "mean");
    line("ga.gray_code", cfg.gray_code ? "true" : "false");
    line("network.step_susceptance", cfg.step_susceptance ? "true" : "false");
    if (cfg.matching_l_mm && cfg.matching_b_mm) {
        std::string l_joined, b_joined;
        for (std::size_t i = 0; i < 5; ++i)
            l_joined += (i ? "," : "") + format_double((*cfg.matching_l_mm)[i]);
        for (std::size_t i = 0; i < 3; ++i)
            b_joined += (i ? "," : "") + format_double((*cfg.matching_b_mm)[i]);
        line("matching.l_mm", l_joined);
        line("matching.b_mm", b_joined);
    }
    if (cfg.z_ref_ohm) num("output.z_ref_ohm", *cfg.z_ref_ohm);
    line("output.dir", cfg.output_dir);
    return out.str();
}

std::string config_schema_help() {
    return R"(Configuration keys ('key = value' lines, '#' comments):

antenna.a_mm                feed guide width (mm, mandatory)
antenna.b_mm                feed guide height (mm, mandatory)
antenna.eps_r               feed/matching dielectric relative permittivity
                            (mandatory, >= 1; no default on purpose)
antenna.tan_delta           dielectric loss tangent (default 0)

band.start_ghz/stop_ghz     sweep edges (GHz) — or, equivalently:
band.center_ghz/span_ghz    band center and width (GHz)
band.n_points               grid points, inclusive endpoints (default 21)

modes.list                  odd TE_m0 indices for the aperture series
                            (default 1,3,5; must start at 1, increasing)

quadrature.nodes_visible    Gauss nodes for the visible spectral region (48)
quadrature.nodes_evanescent nodes per decade of the evanescent tail (32)
quadrature.k_rho_max        tail extent in units of k0 (40)
quadrature.rel_tol          node-doubling convergence target (1e-3)

bounds.length_min_mm        shared search range for the five section
bounds.length_max_mm        lengths (default 0..15 mm)
bounds.height_min_mm        shared search range for the three section
bounds.height_max_mm        heights (default 1 mm .. antenna.b_mm)

ga.population               even population size (default 64)
ga.generations              generation budget (default 200)
ga.crossover_rate           single-point crossover probability (0.9)
ga.mutation_rate            per-bit flip probability (0.02)
ga.elite_count              individuals copied unchanged (1)
ga.tournament_size          selection pressure (2)
ga.seed                     RNG seed; same seed, same result (0)
ga.stagnation_window        stop after this many generations without
                            best-so-far improvement (40)
ga.aggregator               band objective: minimax or mean (minimax)
ga.gray_code                Gray-coded genes (false)

network.step_susceptance    add the height-step fringing susceptance to the
                            two E-plane junctions (false)

matching.l_mm               five section lengths (mm, comma-separated) for
matching.b_mm               the `sweep` subcommand; three section heights

output.z_ref_ohm            Touchstone reference impedance (default: feed
                            TE10 impedance at band center)
output.dir                  output directory (default .)
)";
}

GuideSection antenna_section(const RunConfig& cfg) {
    return GuideSection{cfg.a_mm * 1e-3, cfg.b_mm * 1e-3, 0.0, cfg.eps_r,
                        cfg.tan_delta};
}

ModeSet mode_set(const RunConfig& cfg) { return ModeSet{cfg.modes}; }

QuadratureSpec quadrature_spec(const RunConfig& cfg) {
    return QuadratureSpec{cfg.nodes_visible, cfg.nodes_evanescent, cfg.k_rho_max,
                          cfg.rel_tol};
}

ParameterBounds parameter_bounds(const RunConfig& cfg) {
    return uniform_bounds(cfg.length_min_mm * 1e-3, cfg.length_max_mm * 1e-3,
                          cfg.height_min_mm * 1e-3, cfg.height_max_mm * 1e-3);
}

std::vector<FrequencyPoint> frequency_grid(const RunConfig& cfg) {
    const GuideSection antenna = antenna_section(cfg);
    std::vector<double> cutoffs_hz;
    for (int m : cfg.modes) cutoffs_hz.push_back(cutoff_frequency(antenna, m));
    GuideSection air = antenna;
    air.eps_r = 1.0;
    air.tan_delta = 0.0;
    cutoffs_hz.push_back(cutoff_frequency(air, 1));

    std::vector<FrequencyPoint> grid;
    grid.reserve(cfg.n_points);
    const int n = cfg.n_points;
    for (int i = 0; i < n; ++i) {
        double f_ghz = cfg.f_start_ghz;
        if (i == n - 1)
            f_ghz = cfg.f_stop_ghz;
        else if (i > 0)
            f_ghz = cfg.f_start_ghz +
                    (cfg.f_stop_ghz - cfg.f_start_ghz) * i / (n - 1.0);
        double f_hz = f_ghz * 1e9;
        // a grid point sitting exactly on a modal cutoff would make the
        // propagation constant vanish; nudge it into the propagating side
        for (double fc : cutoffs_hz)
            if (std::abs(f_hz - fc) < 1e-9 * fc) f_hz = fc * (1.0 + 1e-9);
        grid.push_back(frequency_point(f_hz));
    }
    return grid;
}

MatchingConfig explicit_matching(const RunConfig& cfg) {
    if (!cfg.matching_l_mm || !cfg.matching_b_mm)
        throw ConfigError(
            "matching.l_mm and matching.b_mm are required for an explicit sweep");
    MatchingConfig mc;
    for (std::size_t i = 0; i < 5; ++i) mc.lengths[i] = (*cfg.matching_l_mm)[i] * 1e-3;
    for (std::size_t i = 0; i < 3; ++i) mc.heights[i] = (*cfg.matching_b_mm)[i] * 1e-3;
    mc.antenna = antenna_section(cfg);
    mc.step_susceptance = cfg.step_susceptance;
    validate(mc);
    return mc;
}

MatchingConfig identity_matching(const RunConfig& cfg) {
    MatchingConfig mc;
    mc.lengths = {0.0, 0.0, 0.0, 0.0, 0.0};
    const double b = cfg.b_mm * 1e-3;
    mc.heights = {b, b, b};
    mc.antenna = antenna_section(cfg);
    mc.step_susceptance = cfg.step_susceptance;
    return mc;
}

double touchstone_z_ref(const RunConfig& cfg) {
    if (cfg.z_ref_ohm) return *cfg.z_ref_ohm;
    const double f_center_hz = 0.5 * (cfg.f_start_ghz + cfg.f_stop_ghz) * 1e9;
    const ModalParams te10 =
        modal_params(antenna_section(cfg), frequency_point(f_center_hz), 1);
    return te10.z_pv.real();
}

}  // namespace mlamatch
