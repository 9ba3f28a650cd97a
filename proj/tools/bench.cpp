// Benchmark for the two parallel kernels (aperture model tabulation and GA
// population evaluation) against their single-threaded references. Also
// verifies that parallel and serial results are bit-identical, since the GA's
// determinism contract depends on that.

#include <chrono>
#include <cstring>
#include <iostream>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mlamatch/config.hpp"
#include "mlamatch/ga.hpp"
#include "mlamatch/sweep.hpp"

using namespace mlamatch;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool same_bits(cplx a, cplx b) {
    return std::memcmp(&a, &b, sizeof(cplx)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::string config_path =
        (argc > 1) ? argv[1] : std::string(MLAMATCH_EXAMPLE_CONFIG);
    int population_size = (argc > 2) ? std::stoi(argv[2]) : 256;

#ifdef _OPENMP
    std::cout << "OpenMP enabled, max threads " << omp_get_max_threads() << "\n";
#else
    std::cout << "OpenMP disabled; both passes run single-threaded\n";
#endif
    std::cout << "config: " << config_path << "\n\n";

    const RunConfig cfg = load_config(config_path);
    const GuideSection antenna = antenna_section(cfg);
    const auto grid = frequency_grid(cfg);
    const ModeSet modes = mode_set(cfg);
    const QuadratureSpec quad = quadrature_spec(cfg);

    // --- aperture model tabulation ---
    auto t0 = std::chrono::steady_clock::now();
    const ApertureModel serial_model =
        build_aperture_model_serial(antenna, grid, modes, quad);
    const double t_serial_model = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const ApertureModel parallel_model =
        build_aperture_model(antenna, grid, modes, quad);
    const double t_parallel_model = seconds_since(t0);

    bool identical = serial_model.size() == parallel_model.size();
    for (std::size_t k = 0; identical && k < serial_model.size(); ++k)
        identical = same_bits(serial_model.y_ap[k], parallel_model.y_ap[k]) &&
                    same_bits(serial_model.gamma_ap[k], parallel_model.gamma_ap[k]);

    std::cout << "aperture model (" << grid.size() << " points)\n"
              << "  serial:   " << t_serial_model << " s\n"
              << "  parallel: " << t_parallel_model << " s  (speedup "
              << t_serial_model / t_parallel_model << "x)\n"
              << "  bit-identical: " << (identical ? "yes" : "NO") << "\n\n";
    if (!identical) return 1;

    // --- GA population evaluation ---
    Problem problem;
    problem.bounds = parameter_bounds(cfg);
    problem.aperture = &parallel_model;
    problem.aggregator = cfg.aggregator;
    problem.step_susceptance = cfg.step_susceptance;
    problem.gray_code = cfg.gray_code;

    std::mt19937_64 rng(12345);
    std::vector<Chromosome> population(population_size);
    for (Chromosome& c : population) {
        c.genes.resize(ParameterBounds::n_params);
        for (std::uint8_t& g : c.genes)
            g = static_cast<std::uint8_t>(uniform_below(rng, 256));
    }

    t0 = std::chrono::steady_clock::now();
    const auto serial_reports = evaluate_population_serial(population, problem);
    const double t_serial_eval = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel_reports = evaluate_population(population, problem);
    const double t_parallel_eval = seconds_since(t0);

    identical = serial_reports.size() == parallel_reports.size();
    for (std::size_t k = 0; identical && k < serial_reports.size(); ++k) {
        identical = std::memcmp(&serial_reports[k].aggregate,
                                &parallel_reports[k].aggregate,
                                sizeof(double)) == 0 &&
                    serial_reports[k].per_frequency ==
                        parallel_reports[k].per_frequency;
    }

    std::cout << "population evaluation (" << population_size
              << " chromosomes x " << grid.size() << " points)\n"
              << "  serial:   " << t_serial_eval << " s\n"
              << "  parallel: " << t_parallel_eval << " s  (speedup "
              << t_serial_eval / t_parallel_eval << "x)\n"
              << "  bit-identical: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
