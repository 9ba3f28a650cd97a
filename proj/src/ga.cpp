#include "mlamatch/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mlamatch {

namespace {

constexpr const char* param_names[ParameterBounds::n_params] = {
    "l1", "l2", "l3", "l4", "l5", "b1", "b2", "b3"};

std::uint8_t gray_encode_byte(std::uint8_t v) {
    return static_cast<std::uint8_t>(v ^ (v >> 1));
}

std::uint8_t gray_decode_byte(std::uint8_t g) {
    std::uint8_t v = g;
    v ^= v >> 1;
    v ^= v >> 2;
    v ^= v >> 4;
    return v;
}

}  // namespace

void validate(const ParameterBounds& bounds) {
    for (std::size_t i = 0; i < ParameterBounds::n_params; ++i) {
        const ParamRange& r = bounds.ranges[i];
        if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || r.lower >= r.upper)
            throw std::invalid_argument(std::string("bounds for ") + param_names[i] +
                                        " must satisfy lower < upper");
        const double min_lower = (i < 5) ? 0.0 : std::numeric_limits<double>::min();
        if (r.lower < min_lower)
            throw std::invalid_argument(std::string("bounds for ") + param_names[i] +
                                        ((i < 5) ? " must be nonnegative"
                                                 : " must be strictly positive"));
    }
}

ParameterBounds uniform_bounds(double l_lo, double l_hi, double b_lo, double b_hi) {
    ParameterBounds bounds;
    for (std::size_t i = 0; i < 5; ++i) bounds.ranges[i] = {l_lo, l_hi};
    for (std::size_t i = 5; i < ParameterBounds::n_params; ++i)
        bounds.ranges[i] = {b_lo, b_hi};
    validate(bounds);
    return bounds;
}

void validate(const GaParams& params) {
    if (params.population_m < 2 || params.population_m % 2 != 0)
        throw std::invalid_argument("population_m must be even and at least 2");
    if (params.generations_max < 0)
        throw std::invalid_argument("generations_max must be nonnegative");
    if (!(params.crossover_rate >= 0.0) || params.crossover_rate > 1.0)
        throw std::invalid_argument("crossover_rate must lie in [0, 1]");
    if (!(params.mutation_rate >= 0.0) || params.mutation_rate > 1.0)
        throw std::invalid_argument("mutation_rate must lie in [0, 1]");
    if (params.elite_count < 0 || params.elite_count > params.population_m)
        throw std::invalid_argument("elite_count must lie in [0, population_m]");
    if (params.tournament_size < 1 || params.tournament_size > params.population_m)
        throw std::invalid_argument("tournament_size must lie in [1, population_m]");
    if (params.stagnation_window < 1)
        throw std::invalid_argument("stagnation_window must be at least 1");
}

double aggregate_of(Aggregator agg, const std::vector<double>& per_frequency) {
    if (per_frequency.empty())
        throw std::invalid_argument("cannot aggregate an empty reflection list");
    if (agg == Aggregator::minimax)
        return *std::max_element(per_frequency.begin(), per_frequency.end());
    return std::accumulate(per_frequency.begin(), per_frequency.end(), 0.0) /
           static_cast<double>(per_frequency.size());
}

MatchingConfig decode(const Chromosome& chrom, const ParameterBounds& bounds,
                      const GuideSection& antenna, bool gray_code) {
    validate(bounds);
    if (chrom.genes.size() != ParameterBounds::n_params)
        throw std::invalid_argument(
            "chromosome has " + std::to_string(chrom.n_bits()) + " bits, expected " +
            std::to_string(8 * ParameterBounds::n_params));
    MatchingConfig cfg;
    cfg.antenna = antenna;
    for (std::size_t i = 0; i < ParameterBounds::n_params; ++i) {
        const std::uint8_t v =
            gray_code ? gray_decode_byte(chrom.genes[i]) : chrom.genes[i];
        const ParamRange& r = bounds.ranges[i];
        const double value =
            (v == 255) ? r.upper : r.lower + (v / 255.0) * (r.upper - r.lower);
        if (i < 5)
            cfg.lengths[i] = value;
        else
            cfg.heights[i - 5] = value;
    }
    return cfg;
}

Chromosome encode(const MatchingConfig& cfg, const ParameterBounds& bounds,
                  bool gray_code) {
    validate(bounds);
    Chromosome chrom;
    chrom.genes.resize(ParameterBounds::n_params);
    for (std::size_t i = 0; i < ParameterBounds::n_params; ++i) {
        const double value = (i < 5) ? cfg.lengths[i] : cfg.heights[i - 5];
        const ParamRange& r = bounds.ranges[i];
        if (!(value >= r.lower) || !(value <= r.upper))
            throw std::invalid_argument(std::string("parameter ") + param_names[i] +
                                        " lies outside its bounds");
        const double t = (value - r.lower) / (r.upper - r.lower);
        const auto v = static_cast<std::uint8_t>(
            std::clamp(std::lround(t * 255.0), 0L, 255L));
        chrom.genes[i] = gray_code ? gray_encode_byte(v) : v;
    }
    return chrom;
}

namespace {

void check_problem(const Problem& problem) {
    validate(problem.bounds);
    if (problem.aperture == nullptr || problem.aperture->size() == 0)
        throw std::invalid_argument("problem requires a nonempty aperture model");
    for (std::size_t i = 5; i < ParameterBounds::n_params; ++i) {
        if (problem.bounds.ranges[i].upper > problem.aperture->geometry.height_b)
            throw std::invalid_argument(
                std::string("upper bound of ") + param_names[i] +
                " exceeds the feed height; decoded networks would be infeasible");
    }
}

}  // namespace

FitnessReport fitness(const Chromosome& chrom, const Problem& problem) {
    check_problem(problem);
    MatchingConfig cfg = decode(chrom, problem.bounds,
                                problem.aperture->geometry, problem.gray_code);
    cfg.step_susceptance = problem.step_susceptance;

    const ApertureModel& model = *problem.aperture;
    FitnessReport report;
    report.config = cfg;
    report.per_frequency.resize(model.size());
    try {
        for (std::size_t k = 0; k < model.size(); ++k) {
            const TransmissionMatrix t = build_network(cfg, model.grid[k]);
            const double mag = std::abs(gamma_in(t, model.gamma_ap[k]));
            if (!std::isfinite(mag))
                throw std::runtime_error("non-finite reflection");
            report.per_frequency[k] = mag;
        }
        report.aggregate = aggregate_of(problem.aggregator, report.per_frequency);
    } catch (const std::runtime_error&) {
        // Singular network somewhere on the band: pin the chromosome to the
        // worst possible fitness so the generation count stays deterministic.
        std::fill(report.per_frequency.begin(), report.per_frequency.end(), 1.0);
        report.aggregate = 1.0;
    }
    return report;
}

std::vector<FitnessReport> evaluate_population(
    const std::vector<Chromosome>& population, const Problem& problem) {
    check_problem(problem);
    const std::size_t n = population.size();
    std::vector<FitnessReport> reports(n);
    std::vector<std::exception_ptr> failures(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        try {
            reports[k] = fitness(population[k], problem);
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return reports;
}

std::vector<FitnessReport> evaluate_population_serial(
    const std::vector<Chromosome>& population, const Problem& problem) {
    check_problem(problem);
    std::vector<FitnessReport> reports;
    reports.reserve(population.size());
    for (const Chromosome& c : population) reports.push_back(fitness(c, problem));
    return reports;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below requires n > 0");
    // reject the low partial block so every residue is equally likely
    const std::uint64_t reject_below =
        (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
    std::uint64_t v = rng();
    while (v < reject_below) v = rng();
    return (v - reject_below) % n;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

void update_best(GaState& st) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < st.reports.size(); ++k)
        if (st.reports[k].aggregate < st.reports[best].aggregate) best = k;
    if (!st.has_best || st.reports[best].aggregate < st.best.aggregate) {
        st.best = st.reports[best];
        st.best_chromosome = st.population[best];
        st.has_best = true;
    }
}

void mutate(Chromosome& c, double rate, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < c.n_bits(); ++i)
        if (uniform01(rng) < rate) c.flip(i);
}

void crossover(Chromosome& a, Chromosome& b, std::size_t cut) {
    for (std::size_t i = cut; i < a.n_bits(); ++i) {
        const bool bit_a = a.bit(i);
        if (bit_a != b.bit(i)) {
            a.flip(i);
            b.flip(i);
        }
    }
}

}  // namespace

GaState ga_init(const GaParams& params, std::size_t n_genes,
                const PopulationEvaluator& evaluate) {
    validate(params);
    if (n_genes == 0) throw std::invalid_argument("chromosomes need at least one gene");
    GaState st;
    st.seed = params.seed;
    st.rng.seed(params.seed);
    st.population.resize(params.population_m);
    for (Chromosome& c : st.population) {
        c.genes.resize(n_genes);
        for (std::uint8_t& g : c.genes)
            g = static_cast<std::uint8_t>(uniform_below(st.rng, 256));
    }
    st.reports = evaluate(st.population);
    if (st.reports.size() != st.population.size())
        throw std::invalid_argument("evaluator returned a mismatched report count");
    st.generation = 0;
    update_best(st);
    return st;
}

GaState evolve(GaState state, const GaParams& params,
               const PopulationEvaluator& evaluate) {
    validate(params);
    const auto m = static_cast<std::size_t>(params.population_m);
    if (state.population.size() != m || state.reports.size() != m)
        throw std::invalid_argument("state population does not match params.population_m");

    // rank current individuals for elitism; stable sort keeps index order on ties
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return state.reports[x].aggregate < state.reports[y].aggregate;
    });

    std::vector<Chromosome> next;
    next.reserve(m);
    for (int e = 0; e < params.elite_count; ++e)
        next.push_back(state.population[order[e]]);

    const auto pick = [&]() -> const Chromosome& {
        std::size_t best = uniform_below(state.rng, m);
        for (int t = 1; t < params.tournament_size; ++t) {
            const std::size_t c = uniform_below(state.rng, m);
            if (state.reports[c].aggregate < state.reports[best].aggregate) best = c;
        }
        return state.population[best];
    };

    while (next.size() < m) {
        Chromosome a = pick();
        Chromosome b = pick();
        if (uniform01(state.rng) < params.crossover_rate) {
            const std::size_t cut = 1 + uniform_below(state.rng, a.n_bits() - 1);
            crossover(a, b, cut);
        }
        mutate(a, params.mutation_rate, state.rng);
        mutate(b, params.mutation_rate, state.rng);
        next.push_back(std::move(a));
        if (next.size() < m) next.push_back(std::move(b));
    }

    state.population = std::move(next);
    state.reports = evaluate(state.population);
    if (state.reports.size() != state.population.size())
        throw std::invalid_argument("evaluator returned a mismatched report count");
    ++state.generation;
    update_best(state);
    return state;
}

OptimizeResult optimize(const Problem& problem, const GaParams& params) {
    check_problem(problem);
    validate(params);
    const PopulationEvaluator evaluate =
        [&problem](const std::vector<Chromosome>& pop) {
            return evaluate_population(pop, problem);
        };

    GaState st = ga_init(params, ParameterBounds::n_params, evaluate);

    OptimizeResult result;
    result.seed = params.seed;
    const auto record = [&result](const GaState& s) {
        double sum = 0.0;
        for (const FitnessReport& r : s.reports) sum += r.aggregate;
        result.history.push_back({s.generation, s.best.aggregate,
                                  sum / static_cast<double>(s.reports.size()),
                                  s.best.config});
    };
    record(st);

    double last_best = st.best.aggregate;
    int stagnant = 0;
    for (int g = 0; g < params.generations_max; ++g) {
        st = evolve(std::move(st), params, evaluate);
        record(st);
        if (st.best.aggregate < last_best) {
            last_best = st.best.aggregate;
            stagnant = 0;
        } else if (++stagnant >= params.stagnation_window) {
            break;
        }
    }
    result.best = st.best;
    return result;
}

}  // namespace mlamatch
