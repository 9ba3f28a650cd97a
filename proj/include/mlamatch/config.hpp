#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlamatch/aperture.hpp"
#include "mlamatch/ga.hpp"
#include "mlamatch/waveguide.hpp"

namespace mlamatch {

/// Raised for unparseable text, unknown or duplicate keys, missing
/// mandatory fields, and invariant violations; the message always names
/// the offending key or field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parsed run configuration. Values are kept in the file's engineer-facing
/// units (millimeters, gigahertz) so that serialize/parse round-trips are
/// bit-exact; the *_section/*_grid adapters below are the single place where
/// they are converted to SI for the computation pipeline.
struct RunConfig {
    // antenna.* — the radiating guide; eps_r is mandatory and has no default
    double a_mm = 0.0;
    double b_mm = 0.0;
    double eps_r = 0.0;
    double tan_delta = 0.0;

    // band.* — uniform sweep grid, inclusive endpoints
    double f_start_ghz = 0.0;
    double f_stop_ghz = 0.0;
    int n_points = 21;

    // modes.list — odd TE_m0 indices for the aperture series
    std::vector<int> modes{1, 3, 5};

    // quadrature.*
    int nodes_visible = 48;
    int nodes_evanescent = 32;
    double k_rho_max = 40.0;
    double rel_tol = 1e-3;

    // bounds.* — search ranges shared by all lengths / all heights
    double length_min_mm = 0.0;
    double length_max_mm = 15.0;
    double height_min_mm = 1.0;
    double height_max_mm = 0.0;  // defaults to b_mm when absent

    // ga.*
    GaParams ga{};
    Aggregator aggregator = Aggregator::minimax;
    bool gray_code = false;

    // network.*
    bool step_susceptance = false;

    // matching.* — explicit section values for the `sweep` subcommand
    std::optional<std::array<double, 5>> matching_l_mm;
    std::optional<std::array<double, 3>> matching_b_mm;

    // output.*
    std::optional<double> z_ref_ohm;  // Touchstone reference override
    std::string output_dir = ".";

    bool operator==(const RunConfig&) const = default;
};

/// Parses `key = value` lines ('#' starts a comment, blank lines ignored)
/// and validates every invariant. source_name appears in error messages.
RunConfig parse_config(std::string_view text, const std::string& source_name);

RunConfig load_config(const std::string& path);

/// Emits every key explicitly (shortest round-trip number formatting);
/// parse_config(serialize_config(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

/// The documented key reference, printed by `--help-config`.
std::string config_schema_help();

// --- boundary-unit to SI adapters (the one conversion site) ---

/// Antenna guide with length_l = 0 (only the cross-section matters).
GuideSection antenna_section(const RunConfig& cfg);

ModeSet mode_set(const RunConfig& cfg);

QuadratureSpec quadrature_spec(const RunConfig& cfg);

ParameterBounds parameter_bounds(const RunConfig& cfg);

/// Uniform inclusive grid of n_points between f_start and f_stop. A point
/// landing on a modal cutoff of any section material (within 1 part in 1e9)
/// is shifted up by 1 part in 1e9 so downstream modal math stays defined.
std::vector<FrequencyPoint> frequency_grid(const RunConfig& cfg);

/// Matching network from the matching.* keys; ConfigError when they are
/// absent.
MatchingConfig explicit_matching(const RunConfig& cfg);

/// Zero lengths and all heights at the antenna height: cascades to the
/// identity, so sweeps reproduce the bare-aperture baseline.
MatchingConfig identity_matching(const RunConfig& cfg);

/// output.z_ref_ohm when given, else the TE10 power-voltage impedance of
/// the feed guide at band center.
double touchstone_z_ref(const RunConfig& cfg);

}  // namespace mlamatch
