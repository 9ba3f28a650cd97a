#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "mlamatch/aperture.hpp"
#include "mlamatch/network.hpp"

namespace mlamatch {

/// Fixed-length bit string of 8-bit genes; gene g occupies bits [8g, 8g+8)
/// with bit index i addressing bit (i mod 8) of byte (i / 8). The standard
/// matching problem uses 8 genes (five lengths, three heights) = 64 bits.
struct Chromosome {
    std::vector<std::uint8_t> genes;

    std::size_t n_bits() const { return genes.size() * 8; }

    bool bit(std::size_t i) const { return (genes[i / 8] >> (i % 8)) & 1u; }
    void flip(std::size_t i) {
        genes[i / 8] ^= static_cast<std::uint8_t>(1u << (i % 8));
    }

    bool operator==(const Chromosome&) const = default;
};

struct ParamRange {
    double lower = 0.0;  // m
    double upper = 0.0;  // m
};

/// Per-parameter linear decode ranges, ordered l1..l5 then b1..b3.
struct ParameterBounds {
    static constexpr std::size_t n_params = 8;
    std::array<ParamRange, n_params> ranges{};
};

/// Lengths may start at zero (a section can vanish); heights must stay
/// strictly positive. Every range needs lower < upper.
void validate(const ParameterBounds& bounds);

/// Convenience: lengths share [l_lo, l_hi], heights share [b_lo, b_hi].
ParameterBounds uniform_bounds(double l_lo, double l_hi, double b_lo,
                               double b_hi);

struct GaParams {
    int population_m = 64;       // even, >= 2
    int generations_max = 200;
    double crossover_rate = 0.9;
    double mutation_rate = 0.02;  // per bit
    int elite_count = 1;
    int tournament_size = 2;
    std::uint64_t seed = 0;
    int stagnation_window = 40;  // stop after this many generations without
                                 // best-so-far improvement

    bool operator==(const GaParams&) const = default;
};

void validate(const GaParams& params);

enum class Aggregator { minimax, mean };

double aggregate_of(Aggregator agg, const std::vector<double>& per_frequency);

/// Gene byte v maps linearly onto its range: lower + (v/255)*(upper-lower).
/// With gray_code set, the byte is Gray-decoded before the linear map.
/// Throws std::invalid_argument when the chromosome length does not match
/// the parameter count.
MatchingConfig decode(const Chromosome& chrom, const ParameterBounds& bounds,
                      const GuideSection& antenna, bool gray_code = false);

/// Nearest-byte quantization of an in-bounds configuration;
/// decode(encode(cfg)) differs from cfg by at most (upper-lower)/510 per
/// parameter, and encode(decode(chrom)) == chrom bit for bit. Out-of-bounds
/// parameters throw std::invalid_argument.
Chromosome encode(const MatchingConfig& cfg, const ParameterBounds& bounds,
                  bool gray_code = false);

struct FitnessReport {
    double aggregate = 0.0;
    std::vector<double> per_frequency;  // |gamma_in| per grid point
    MatchingConfig config{};
};

/// Everything a fitness evaluation needs besides the chromosome itself.
/// The aperture model is borrowed and must outlive the problem.
struct Problem {
    ParameterBounds bounds;
    const ApertureModel* aperture = nullptr;
    Aggregator aggregator = Aggregator::minimax;
    bool step_susceptance = false;
    bool gray_code = false;
};

/// Band reflection of one chromosome: |gamma_in| per grid frequency through
/// the cascade terminated by the tabulated aperture reflection, aggregated
/// by minimax or mean. A singular network anywhere on the band penalizes
/// the whole chromosome with aggregate 1.0 instead of aborting the run.
FitnessReport fitness(const Chromosome& chrom, const Problem& problem);

/// One report per chromosome, OpenMP-parallel over the population. The
/// aperture model is shared read-only and no RNG is touched, so results
/// are bit-identical for any worker count.
std::vector<FitnessReport> evaluate_population(
    const std::vector<Chromosome>& population, const Problem& problem);

/// Single-threaded reference for the parallel evaluation.
std::vector<FitnessReport> evaluate_population_serial(
    const std::vector<Chromosome>& population, const Problem& problem);

using PopulationEvaluator =
    std::function<std::vector<FitnessReport>(const std::vector<Chromosome>&)>;

struct GaState {
    std::vector<Chromosome> population;
    std::vector<FitnessReport> reports;  // parallel to population
    int generation = 0;
    std::uint64_t seed = 0;
    std::mt19937_64 rng;
    FitnessReport best;  // best-so-far across all generations
    Chromosome best_chromosome;
    bool has_best = false;
};

/// Deterministic draws from the single GA stream. uniform_below uses
/// rejection sampling and uniform01 the top 53 bits, so sequences are
/// identical across platforms and standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);
double uniform01(std::mt19937_64& rng);

/// Seeds the RNG, draws population_m random chromosomes of n_genes bytes
/// each and evaluates them.
GaState ga_init(const GaParams& params, std::size_t n_genes,
                const PopulationEvaluator& evaluate);

/// One generation: elitism (top elite_count copied unchanged), tournament
/// selection, single-point crossover at a uniform random bit boundary, then
/// per-bit mutation, then evaluation. Population size is preserved and the
/// best-so-far aggregate never increases.
GaState evolve(GaState state, const GaParams& params,
               const PopulationEvaluator& evaluate);

struct GenerationRecord {
    int generation = 0;
    double best = 0.0;  // best-so-far aggregate
    double mean = 0.0;  // population mean aggregate
    MatchingConfig best_config{};
};

struct OptimizeResult {
    FitnessReport best;
    std::vector<GenerationRecord> history;  // entry 0 = initial population
    std::uint64_t seed = 0;
};

/// Full optimization loop: random initialization, then evolve until
/// generations_max or no best-so-far improvement over stagnation_window
/// generations. (seed, params, problem) fully determine the outcome.
OptimizeResult optimize(const Problem& problem, const GaParams& params);

}  // namespace mlamatch
