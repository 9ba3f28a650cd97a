#include "mlamatch/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "mlamatch/two_port.hpp"

namespace mlamatch {

namespace {

double parse_csv_double(std::string_view token, const std::string& path,
                        int line_no) {
    double value = 0.0;
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + std::string(token) + "'");
    return value;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

SweepRow make_row(double f_hz, cplx gamma) {
    SweepRow row;
    row.f_hz = f_hz;
    row.re = gamma.real();
    row.im = gamma.imag();
    row.mag = std::abs(gamma);
    row.mag_db = (row.mag > 1e-10) ? 20.0 * std::log10(row.mag) : -200.0;
    return row;
}

ApertureModel aperture_model_for(const RunConfig& cfg) {
    return build_aperture_model(antenna_section(cfg), frequency_grid(cfg),
                                mode_set(cfg), quadrature_spec(cfg));
}

SweepResult sweep(const ApertureModel& model,
                  const std::optional<MatchingConfig>& matching) {
    SweepResult result;
    result.rows.reserve(model.size());
    for (std::size_t k = 0; k < model.size(); ++k) {
        cplx gamma = model.gamma_ap[k];
        if (matching) {
            try {
                const TransmissionMatrix t = build_network(*matching, model.grid[k]);
                gamma = gamma_in(t, gamma);
            } catch (const std::exception& err) {
                std::ostringstream msg;
                msg << "sweep failed at " << model.grid[k].f / 1e9
                    << " GHz: " << err.what();
                throw std::runtime_error(msg.str());
            }
        }
        result.rows.push_back(make_row(model.grid[k].f, gamma));
    }
    return result;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

void write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "freq_hz,re,im,mag,mag_db\n";
    for (const SweepRow& r : result.rows)
        out << format_double(r.f_hz) << ',' << format_double(r.re) << ','
            << format_double(r.im) << ',' << format_double(r.mag) << ','
            << format_double(r.mag_db) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

SweepResult read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "freq_hz,re,im,mag,mag_db")
        throw std::runtime_error(path + ": missing sweep CSV header");
    SweepResult result;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        double values[5];
        std::string_view rest = line;
        for (int col = 0; col < 5; ++col) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (col == 4))
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": expected 5 columns");
            values[col] = parse_csv_double(rest.substr(0, comma), path, line_no);
            if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
        }
        result.rows.push_back(
            {values[0], values[1], values[2], values[3], values[4]});
    }
    return result;
}

void write_touchstone(const SweepResult& result, const std::string& path,
                      double z_ref_ohm, const std::string& note) {
    for (std::size_t k = 1; k < result.rows.size(); ++k)
        if (!(result.rows[k].f_hz > result.rows[k - 1].f_hz))
            throw std::invalid_argument(
                "touchstone output requires strictly increasing frequencies");
    std::ofstream out = open_out(path);
    if (!note.empty()) out << "! " << note << '\n';
    out << "! reference impedance " << format_double(z_ref_ohm) << " ohm\n";
    out << "# GHz S RI R " << format_double(z_ref_ohm) << '\n';
    for (const SweepRow& r : result.rows)
        out << format_double(r.f_hz / 1e9) << ' ' << format_double(r.re) << ' '
            << format_double(r.im) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_model_csv(const ApertureModel& model, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "freq_hz,re_y_ap,im_y_ap,mag_gamma_ap\n";
    for (std::size_t k = 0; k < model.size(); ++k)
        out << format_double(model.grid[k].f) << ','
            << format_double(model.y_ap[k].real()) << ','
            << format_double(model.y_ap[k].imag()) << ','
            << format_double(std::abs(model.gamma_ap[k])) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_history_csv(const std::vector<GenerationRecord>& history,
                       const std::string& path) {
    std::ofstream out = open_out(path);
    out << "generation,best,mean,l1_mm,l2_mm,l3_mm,l4_mm,l5_mm,b1_mm,b2_mm,b3_mm\n";
    for (const GenerationRecord& rec : history) {
        out << rec.generation << ',' << format_double(rec.best) << ','
            << format_double(rec.mean);
        for (double l : rec.best_config.lengths) out << ',' << format_double(l * 1e3);
        for (double b : rec.best_config.heights) out << ',' << format_double(b * 1e3);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace mlamatch
