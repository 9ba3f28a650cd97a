#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlamatch/aperture.hpp"
#include "mlamatch/config.hpp"
#include "mlamatch/ga.hpp"
#include "mlamatch/network.hpp"

namespace mlamatch {

struct SweepRow {
    double f_hz = 0.0;
    double re = 0.0;
    double im = 0.0;
    double mag = 0.0;
    double mag_db = 0.0;  // 20*log10(mag), floored at -200 dB
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Fills the derived columns: mag = |re + j*im|, mag_db = 20*log10(mag)
/// with a -200 dB floor so the CSV stays numeric for a perfect match.
SweepRow make_row(double f_hz, cplx gamma);

/// Builds the aperture model on the config's frequency grid (parallel over
/// grid points).
ApertureModel aperture_model_for(const RunConfig& cfg);

/// Reflection over the model grid: the bare aperture when matching is
/// absent, otherwise gamma_in of the full cascade terminated by the
/// tabulated aperture reflection. Network failures abort with the offending
/// frequency in the message.
SweepResult sweep(const ApertureModel& model,
                  const std::optional<MatchingConfig>& matching);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Header "freq_hz,re,im,mag,mag_db", one row per grid point, LF endings.
void write_csv(const SweepResult& result, const std::string& path);

/// Strict inverse of write_csv (exact values, since formatting is
/// round-trip-safe). Throws std::runtime_error on malformed content.
SweepResult read_csv(const std::string& path);

/// Version-1 one-port Touchstone: option line "# GHz S RI R <z_ref>", then
/// one "f_ghz re im" row per point. Requires strictly increasing
/// frequencies. A non-empty note is written as a leading '!' comment; the
/// reference impedance is always recorded in a comment as well.
void write_touchstone(const SweepResult& result, const std::string& path,
                      double z_ref_ohm, const std::string& note = "");

/// Diagnostic dump of the tabulated aperture data:
/// "freq_hz,re_y_ap,im_y_ap,mag_gamma_ap".
void write_model_csv(const ApertureModel& model, const std::string& path);

/// GA progress log: "generation,best,mean" then the eight decoded
/// parameters in millimeters, one row per generation.
void write_history_csv(const std::vector<GenerationRecord>& history,
                       const std::string& path);

}  // namespace mlamatch
