#pragma once

#include "ecga/core.hpp"
#include "ecga/engine.hpp"
#include "ecga/problems.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ecga
{

// Fraction of the population equal to each optimum, indexed by optimum id.
std::vector<double> market_share(const Population &pop, const OptimaCatalog &catalog);

// Number of optima with at least one copy in the population.
std::size_t distinct_optima(const Population &pop, const OptimaCatalog &catalog);

// True iff at least `required` distinct optima are present.
bool success(const Population &pop, const OptimaCatalog &catalog, std::size_t required);

struct ExperimentConfig
{
    RunConfig base;
    std::size_t runs = 50;
    std::vector<std::size_t> checkpoints; // ascending generation counts
    std::size_t required = 0;             // distinct optima needed; 0 means n_opt
    std::vector<std::size_t> population_grid;
    std::size_t start_population = 16;
    std::size_t max_population = std::size_t{1} << 20;
    double resolution = 0.1; // bisection stops when the bracket is within this fraction of n
    unsigned threads = 0;    // 0 means std::thread::hardware_concurrency()

    void validate() const;
    std::size_t required_optima() const;
};

struct GammaRow
{
    Algorithm algo = Algorithm::subniche;
    std::size_t pop = 0;
    std::size_t checkpoint = 0;
    double gamma = 0.0;
    double standard_error = 0.0;
    std::size_t runs = 0;
};

// Normal-approximation standard error sqrt(g (1 - g) / runs).
double gamma_stderr(double gamma, std::size_t runs);

// Success counts per checkpoint for `runs` runs at population size `n`.
// Run r uses stream id r under the base seed. With `stop_below` set, the
// ensemble stops once the final checkpoint can no longer reach that many
// successes; the counts are then partial.
std::vector<std::size_t> ensemble_successes(const ExperimentConfig &cfg, std::size_t n,
                                            std::size_t stop_below = 0);

std::vector<GammaRow> gamma_sweep(const ExperimentConfig &cfg);

struct MinPopResult
{
    std::size_t n_min = 0;       // smallest probed size meeting the target
    std::size_t last_failure = 0; // largest probed size known to fail, 0 if none
    double gamma = 0.0;           // ensemble gamma at n_min
    bool saturated = false;       // cap reached without meeting the target
    std::size_t probes = 0;
};

// Doubling search from start_population until gamma >= target at
// checkpoint t, then bisection between the last failure and the first
// success down to the configured resolution.
MinPopResult min_population(const ExperimentConfig &cfg, double target_gamma, std::size_t t);

// Unnormalised population size from the niching population-sizing model,
// natural log in numerator and denominator.
double mahfoud_model(double n_opt, double gamma, double t);

struct FrequencyConfig
{
    RunConfig base; // algo is forced to subniche
    std::size_t runs = 30;
    std::size_t first_generation = 20;
    std::size_t last_generation = 100;
    std::size_t trajectory_block = 0;
    unsigned threads = 0;
};

struct FrequencyRow
{
    std::size_t block = 0;
    std::string schema; // block configuration, e.g. "0110"
    double ideal = 0.0;
    double experimental = 0.0;
    double standard_error = 0.0;
};

struct TrajectoryRow
{
    std::size_t generation = 0;
    std::string schema;
    double frequency = 0.0; // mean over runs
};

struct FrequencyReport
{
    std::vector<FrequencyRow> rows;
    std::vector<TrajectoryRow> trajectory;
};

// Proportionate frequencies of the uniform-distribution schema fitness of a block.
std::vector<double> ideal_frequencies(const ProblemSpec &spec, std::size_t block);

// Per-block configuration frequencies of the sampled population, averaged
// over the generation window and over runs, against ideal_frequencies.
FrequencyReport verify_frequencies(const FrequencyConfig &cfg);

// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body);

} // namespace ecga
