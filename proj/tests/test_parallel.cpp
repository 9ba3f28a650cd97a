#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <random>

#include "mlamatch/ga.hpp"
#include "mlamatch/sweep.hpp"

using namespace mlamatch;

namespace {

const GuideSection kMla{0.017, 0.011, 0.0, 4.0, 0.0};

std::vector<FrequencyPoint> grid_of(int n) {
    std::vector<FrequencyPoint> grid;
    for (int i = 0; i < n; ++i)
        grid.push_back(frequency_point(9.2e9 + 1.1e9 * i / (n - 1.0)));
    return grid;
}

bool same_model(const ApertureModel& a, const ApertureModel& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a.grid[k].f != b.grid[k].f) return false;
        if (a.y_ap[k] != b.y_ap[k]) return false;
        if (a.gamma_ap[k] != b.gamma_ap[k]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("parallel model build matches the serial reference bit for bit") {
    const ModeSet modes{{1, 3}};
    const QuadratureSpec q{16, 16, 40.0, 1e-3};
    const auto grid = grid_of(7);

    const ApertureModel serial = build_aperture_model_serial(kMla, grid, modes, q);
    const ApertureModel parallel = build_aperture_model(kMla, grid, modes, q);
    CHECK(same_model(serial, parallel));
}

TEST_CASE("parallel population evaluation matches the serial reference") {
    const ApertureModel model = build_aperture_model_serial(
        kMla, grid_of(3), ModeSet{{1}}, QuadratureSpec{8, 8, 40.0, 0.05});
    Problem problem;
    problem.bounds = uniform_bounds(0.0, 0.015, 1e-3, 0.011);
    problem.aperture = &model;

    std::mt19937_64 rng(12345);
    std::vector<Chromosome> population(32);
    for (Chromosome& c : population) {
        c.genes.resize(8);
        for (auto& g : c.genes) g = static_cast<std::uint8_t>(rng() & 0xff);
    }

    const auto serial = evaluate_population_serial(population, problem);
    const auto parallel = evaluate_population(population, problem);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        CHECK(parallel[k].aggregate == serial[k].aggregate);
        CHECK(parallel[k].per_frequency == serial[k].per_frequency);
    }
}

TEST_CASE("optimization results are independent of the worker count") {
    const ApertureModel model = build_aperture_model_serial(
        kMla, grid_of(3), ModeSet{{1}}, QuadratureSpec{8, 8, 40.0, 0.05});
    Problem problem;
    problem.bounds = uniform_bounds(0.0, 0.015, 1e-3, 0.011);
    problem.aperture = &model;

    GaParams params;
    params.population_m = 16;
    params.generations_max = 8;
    params.seed = 99;

#ifdef _OPENMP
    const int original = omp_get_max_threads();
#endif
    std::vector<OptimizeResult> results;
    for (int workers : {1, 2, 8}) {
#ifdef _OPENMP
        omp_set_num_threads(workers);
#else
        (void)workers;
#endif
        results.push_back(optimize(problem, params));
    }
#ifdef _OPENMP
    omp_set_num_threads(original);
#endif

    for (std::size_t r = 1; r < results.size(); ++r) {
        CHECK(results[r].best.aggregate == results[0].best.aggregate);
        CHECK(results[r].best.per_frequency == results[0].best.per_frequency);
        CHECK(results[r].best.config.lengths == results[0].best.config.lengths);
        CHECK(results[r].best.config.heights == results[0].best.config.heights);
        REQUIRE(results[r].history.size() == results[0].history.size());
        for (std::size_t k = 0; k < results[0].history.size(); ++k) {
            CHECK(results[r].history[k].best == results[0].history[k].best);
            CHECK(results[r].history[k].mean == results[0].history[k].mean);
        }
    }
}
