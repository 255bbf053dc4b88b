#pragma once

#include "ecga/core.hpp"
#include "ecga/mpm.hpp"
#include "ecga/niching.hpp"
#include "ecga/problems.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecga
{

enum class Algorithm
{
    subniche, // sub-structural niching: schema fitness drives the sampling frequencies
    rts,      // learned marginals + restricted tournament replacement
};

Algorithm parse_algorithm(std::string_view token);
std::string_view algorithm_token(Algorithm a);

// Reference against which schema fitness is measured in the subniche step.
enum class SchemaBaseline
{
    generation, // mean fitness of the current population
    cumulative, // mean fitness of every individual evaluated so far in the run
};

SchemaBaseline parse_baseline(std::string_view token);
std::string_view baseline_token(SchemaBaseline b);

struct SelectionConfig
{
    enum class Kind
    {
        tournament,
        truncation,
    };
    Kind kind = Kind::tournament;
    std::size_t tournament_size = 2;
    double truncation_fraction = 0.5;
};

struct RunConfig
{
    ProblemSpec problem;
    Algorithm algo = Algorithm::subniche;
    std::size_t population_size = 100;
    std::size_t generations = 100;
    SelectionConfig selection;
    RtsConfig rts; // window 0 means the problem length
    SchemaBaseline baseline = SchemaBaseline::cumulative;
    ModelSearchOptions model_search;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::size_t record_interval = 1;

    // Throws UsageError on any invalid field.
    void validate() const;
    std::size_t rts_window() const noexcept
    {
        return rts.window == 0 ? problem.length() : rts.window;
    }
};

// Tournaments of `size` members drawn uniformly with replacement; the
// fittest is copied, ties broken uniformly among the tied members.
Population tournament_select(const Population &pop, std::size_t size, std::size_t count, RandomSource &rng);

// Copies the best ceil(fraction * n) members round-robin until `count`
// parents are selected. Ties in fitness keep population order.
Population truncation_select(const Population &pop, double fraction, std::size_t count);

Population select_parents(const Population &pop, const SelectionConfig &selection, std::size_t count,
                          RandomSource &rng);

struct GenerationRecord
{
    std::size_t generation = 0;
    std::vector<double> shares; // per optimum id
    std::size_t distinct_optima = 0;
    double best_fitness = 0.0;
    std::string partition; // signature of the model that produced this generation
};

struct RunTrace
{
    std::vector<GenerationRecord> records;
    std::size_t evaluations = 0;
};

struct StepReport
{
    PartitionModel model;
    std::optional<SchemaTable> schemas; // subniche only, with frequencies
    std::size_t replacements = 0;      // rts only
};

// One run as a state machine. Construction draws and evaluates the initial
// population; every step() advances one generation.
class EcgaRun
{
  public:
    explicit EcgaRun(RunConfig config);

    const RunConfig &config() const noexcept
    {
        return config_;
    }
    const Population &population() const noexcept
    {
        return population_;
    }
    const OptimaCatalog &catalog() const noexcept
    {
        return catalog_;
    }
    std::size_t generation() const noexcept
    {
        return generation_;
    }
    std::size_t evaluations() const noexcept
    {
        return evaluations_;
    }
    double cumulative_mean_fitness() const noexcept
    {
        return cumulative_sum_ / static_cast<double>(evaluations_);
    }

    StepReport step();

    // Market shares and summary of the current population.
    GenerationRecord snapshot(std::string partition = {}) const;

  private:
    StepReport step_subniche(const Population &parents);
    StepReport step_rts(const Population &parents);
    void evaluate(Population &pop);

    RunConfig config_;
    RandomSource rng_;
    OptimaCatalog catalog_;
    Population population_;
    std::size_t generation_ = 0;
    std::size_t evaluations_ = 0;
    double cumulative_sum_ = 0.0;
};

using StepObserver = std::function<void(const EcgaRun &, const StepReport &)>;

// Runs config.generations steps, recording a snapshot at generation 0 and at
// every multiple of record_interval.
RunTrace run(const RunConfig &config, const StepObserver &observer = {});

} // namespace ecga
