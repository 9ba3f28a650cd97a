// Command-line front end: baseline aperture sweeps, explicit matching-network
// sweeps, GA optimization runs, and CSV -> Touchstone export.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "mlamatch/config.hpp"
#include "mlamatch/ga.hpp"
#include "mlamatch/sweep.hpp"

namespace fs = std::filesystem;
using namespace mlamatch;

namespace {

/// Paths that don't exist as given fall back to $MLAMATCH_CONFIG_DIR/<path>,
/// so shipped example configs work from any working directory.
std::string resolve_config_path(const std::string& given) {
    if (fs::exists(given)) return given;
    if (const char* dir = std::getenv("MLAMATCH_CONFIG_DIR")) {
        const fs::path candidate = fs::path(dir) / given;
        if (fs::exists(candidate)) return candidate.string();
    }
    return given;  // load_config reports the unreadable path
}

/// Explicit --out values are honored verbatim; defaults land in the
/// config's output directory.
std::string out_path(const RunConfig& cfg, const std::string& flag_value,
                     const char* default_name) {
    if (!flag_value.empty()) return flag_value;
    return (fs::path(cfg.output_dir) / default_name).string();
}

const char* aggregator_name(Aggregator agg) {
    return agg == Aggregator::minimax ? "minimax" : "mean";
}

double band_aggregate(Aggregator agg, const SweepResult& result) {
    std::vector<double> mags;
    mags.reserve(result.rows.size());
    for (const SweepRow& r : result.rows) mags.push_back(r.mag);
    return aggregate_of(agg, mags);
}

void print_matching_mm(const MatchingConfig& mc) {
    const char* names[8] = {"l1", "l2", "l3", "l4", "l5", "b1", "b2", "b3"};
    for (std::size_t i = 0; i < 5; ++i)
        std::cout << "  " << names[i] << " = " << format_double(mc.lengths[i] * 1e3)
                  << " mm\n";
    for (std::size_t i = 0; i < 3; ++i)
        std::cout << "  " << names[5 + i] << " = "
                  << format_double(mc.heights[i] * 1e3) << " mm\n";
}

int run_aperture(const std::string& config_path, const std::string& out,
                 const std::string& dump_admittance,
                 const std::string& touchstone) {
    const RunConfig cfg = load_config(resolve_config_path(config_path));
    const ApertureModel model = aperture_model_for(cfg);
    const SweepResult result = sweep(model, std::nullopt);

    const std::string csv = out_path(cfg, out, "aperture.csv");
    write_csv(result, csv);
    std::cout << "wrote " << csv << " (" << result.rows.size() << " points)\n";
    if (!dump_admittance.empty()) {
        write_model_csv(model, dump_admittance);
        std::cout << "wrote " << dump_admittance << '\n';
    }
    if (!touchstone.empty()) {
        write_touchstone(result, touchstone, touchstone_z_ref(cfg),
                         "bare aperture reflection");
        std::cout << "wrote " << touchstone << '\n';
    }
    std::cout << aggregator_name(cfg.aggregator) << " |gamma_ap| = "
              << format_double(band_aggregate(cfg.aggregator, result)) << '\n';
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& out,
              const std::string& touchstone) {
    const RunConfig cfg = load_config(resolve_config_path(config_path));
    const MatchingConfig mc = explicit_matching(cfg);
    const ApertureModel model = aperture_model_for(cfg);
    const SweepResult result = sweep(model, mc);

    const std::string csv = out_path(cfg, out, "sweep.csv");
    write_csv(result, csv);
    std::cout << "wrote " << csv << " (" << result.rows.size() << " points)\n";
    if (!touchstone.empty()) {
        write_touchstone(result, touchstone, touchstone_z_ref(cfg),
                         "matched input reflection");
        std::cout << "wrote " << touchstone << '\n';
    }
    std::cout << aggregator_name(cfg.aggregator) << " |gamma_in| = "
              << format_double(band_aggregate(cfg.aggregator, result)) << '\n';
    return 0;
}

int run_optimize(const std::string& config_path, const std::string& out,
                 const std::string& history_path, const std::string& touchstone,
                 const std::optional<std::uint64_t>& seed_override) {
    RunConfig cfg = load_config(resolve_config_path(config_path));
    if (seed_override) cfg.ga.seed = *seed_override;

    const ApertureModel model = aperture_model_for(cfg);
    const SweepResult baseline = sweep(model, std::nullopt);

    Problem problem;
    problem.bounds = parameter_bounds(cfg);
    problem.aperture = &model;
    problem.aggregator = cfg.aggregator;
    problem.step_susceptance = cfg.step_susceptance;
    problem.gray_code = cfg.gray_code;
    const OptimizeResult result = optimize(problem, cfg.ga);

    const SweepResult matched = sweep(model, result.best.config);
    const std::string csv = out_path(cfg, out, "optimized.csv");
    const std::string history = out_path(cfg, history_path, "history.csv");
    write_csv(matched, csv);
    write_history_csv(result.history, history);
    if (!touchstone.empty())
        write_touchstone(matched, touchstone, touchstone_z_ref(cfg),
                         "optimized input reflection");

    std::cout << "seed " << result.seed << ", "
              << result.history.back().generation << " generations\n";
    std::cout << "best configuration:\n";
    print_matching_mm(result.best.config);
    std::cout << aggregator_name(cfg.aggregator) << " |gamma_in| = "
              << format_double(result.best.aggregate) << '\n';
    std::cout << aggregator_name(cfg.aggregator) << " |gamma_ap| baseline = "
              << format_double(band_aggregate(cfg.aggregator, baseline)) << '\n';
    std::cout << "wrote " << csv << " and " << history << '\n';
    if (!touchstone.empty()) std::cout << "wrote " << touchstone << '\n';
    return 0;
}

int run_export(const std::string& in, const std::string& out, double z_ref) {
    const SweepResult result = read_csv(in);
    write_touchstone(result, out, z_ref, "exported from " + in);
    std::cout << "wrote " << out << " (" << result.rows.size() << " points)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"waveguide-fed antenna matching-network designer"};
    app.require_subcommand(1);
    app.add_flag_callback(
        "--help-config",
        [] {
            std::cout << config_schema_help();
            throw CLI::Success{};
        },
        "print the configuration key reference and exit");
    int threads = 0;
    app.add_option("--threads", threads, "worker thread count (default: all cores)");

    std::string config_path, out, touchstone, dump_admittance, history_path;
    std::string export_in, export_out;
    double z_ref = 50.0;
    std::optional<std::uint64_t> seed_override;

    CLI::App* ap = app.add_subcommand("aperture", "bare aperture reflection sweep");
    ap->add_option("--config", config_path, "run configuration file")->required();
    ap->add_option("--out", out, "sweep CSV path (default <output.dir>/aperture.csv)");
    ap->add_option("--dump-admittance", dump_admittance,
                   "also write the tabulated aperture admittance CSV");
    ap->add_option("--touchstone", touchstone, "also write a one-port .s1p file");

    CLI::App* sw = app.add_subcommand(
        "sweep", "input reflection of the matching.* network from the config");
    sw->add_option("--config", config_path, "run configuration file")->required();
    sw->add_option("--out", out, "sweep CSV path (default <output.dir>/sweep.csv)");
    sw->add_option("--touchstone", touchstone, "also write a one-port .s1p file");

    CLI::App* op = app.add_subcommand("optimize", "GA search for the best network");
    op->add_option("--config", config_path, "run configuration file")->required();
    op->add_option("--seed", seed_override, "override ga.seed from the config");
    op->add_option("--out", out,
                   "winner sweep CSV path (default <output.dir>/optimized.csv)");
    op->add_option("--history", history_path,
                   "GA progress CSV path (default <output.dir>/history.csv)");
    op->add_option("--touchstone", touchstone, "also write a one-port .s1p file");

    CLI::App* ex = app.add_subcommand("export", "convert a sweep CSV to Touchstone");
    ex->add_option("--in", export_in, "sweep CSV produced by this tool")->required();
    ex->add_option("--out", export_out, "one-port .s1p path")->required();
    ex->add_option("--z-ref", z_ref, "reference impedance in ohms (default 50)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (ap->parsed())
            return run_aperture(config_path, out, dump_admittance, touchstone);
        if (sw->parsed()) return run_sweep(config_path, out, touchstone);
        if (op->parsed())
            return run_optimize(config_path, out, history_path, touchstone,
                                seed_override);
        if (ex->parsed()) return run_export(export_in, export_out, z_ref);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
