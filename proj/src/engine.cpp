#include "ecga/engine.hpp"

#include "ecga/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ecga
{

Algorithm parse_algorithm(std::string_view token)
{
    if (token == "subniche")
        return Algorithm::subniche;
    if (token == "rts")
        return Algorithm::rts;
    throw UsageError("unknown algorithm '" + std::string(token) + "' (expected subniche or rts)");
}

std::string_view algorithm_token(Algorithm a)
{
    return a == Algorithm::subniche ? "subniche" : "rts";
}

SchemaBaseline parse_baseline(std::string_view token)
{
    if (token == "generation")
        return SchemaBaseline::generation;
    if (token == "cumulative")
        return SchemaBaseline::cumulative;
    throw UsageError("unknown schema baseline '" + std::string(token) + "' (expected generation or cumulative)");
}

std::string_view baseline_token(SchemaBaseline b)
{
    return b == SchemaBaseline::generation ? "generation" : "cumulative";
}

void RunConfig::validate() const
{
    problem.validate();
    if (problem.m > max_enumerable_blocks)
        throw UsageError("m exceeds the optima enumeration cap of 12 blocks");
    if (population_size < 2)
        throw UsageError("population size must be at least 2");
    if (selection.kind == SelectionConfig::Kind::tournament && selection.tournament_size < 2)
        throw UsageError("tournament size must be at least 2");
    if (selection.kind == SelectionConfig::Kind::truncation &&
        !(selection.truncation_fraction > 0.0 && selection.truncation_fraction <= 1.0))
        throw UsageError("truncation fraction must lie in (0, 1]");
    if (algo == Algorithm::rts && (rts_window() < 1 || rts_window() > population_size))
        throw UsageError("RTS window must lie in [1, population size]");
    if (record_interval < 1)
        throw UsageError("record interval must be at least 1");
}

Population tournament_select(const Population &pop, std::size_t size, std::size_t count, RandomSource &rng)
{
    if (pop.empty())
        throw UsageError("tournament_select: empty population");
    if (size < 1)
        throw UsageError("tournament_select: tournament size must be positive");
    if (!pop.all_evaluated())
        throw UsageError("tournament_select: population has unevaluated members");

    Population out(pop.genome_length());
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c)
    {
        std::size_t winner = rng.uniform_index(pop.size());
        std::size_t tied = 1;
        for (std::size_t r = 1; r < size; ++r)
        {
            const std::size_t challenger = rng.uniform_index(pop.size());
            const double fc = pop[challenger].fitness();
            const double fw = pop[winner].fitness();
            if (fc > fw)
            {
                winner = challenger;
                tied = 1;
            }
            else if (fc == fw)
            {
                // Reservoir choice keeps every tied entrant equally likely.
                ++tied;
                if (rng.uniform_index(tied) == 0)
                    winner = challenger;
            }
        }
        out.push_back(pop[winner]);
    }
    return out;
}

Population truncation_select(const Population &pop, double fraction, std::size_t count)
{
    if (pop.empty())
        throw UsageError("truncation_select: empty population");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw UsageError("truncation_select: fraction must lie in (0, 1]");
    if (!pop.all_evaluated())
        throw UsageError("truncation_select: population has unevaluated members");

    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].fitness() > pop[b].fitness(); });
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(pop.size()) - 1e-9)));

    Population out(pop.genome_length());
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c)
        out.push_back(pop[order[c % keep]]);
    return out;
}

Population select_parents(const Population &pop, const SelectionConfig &selection, std::size_t count,
                          RandomSource &rng)
{
    if (selection.kind == SelectionConfig::Kind::truncation)
        return truncation_select(pop, selection.truncation_fraction, count);
    return tournament_select(pop, selection.tournament_size, count, rng);
}

EcgaRun::EcgaRun(RunConfig config) : config_(std::move(config)), rng_(config_.seed, config_.stream)
{
    config_.validate();
    catalog_ = enumerate_optima(config_.problem);

    const std::size_t length = config_.problem.length();
    population_ = Population(length);
    population_.reserve(config_.population_size);
    for (std::size_t i = 0; i < config_.population_size; ++i)
        population_.push_back(Individual(random_genome(length, rng_)));
    evaluate(population_);
}

void EcgaRun::evaluate(Population &pop)
{
    for (auto &ind : pop)
    {
        const double f = ecga::evaluate(ind.genome(), config_.problem);
        ind.set_fitness(f);
        cumulative_sum_ += f;
    }
    evaluations_ += pop.size();
}

StepReport EcgaRun::step()
{
    const std::size_t n = config_.population_size;
    const Population parents = select_parents(population_, config_.selection, n, rng_);
    StepReport report = config_.algo == Algorithm::subniche ? step_subniche(parents) : step_rts(parents);
    ++generation_;
    return report;
}

StepReport EcgaRun::step_subniche(const Population &parents)
{
    const std::size_t n = config_.population_size;
    StepReport report{greedy_model_search(parents, n, config_.model_search), std::nullopt, 0};

    std::optional<double> baseline;
    if (config_.baseline == SchemaBaseline::cumulative)
        baseline = cumulative_mean_fitness();
    SchemaTable table = proportionate_frequencies(estimate_schema_fitness(report.model, population_, baseline));

    Population offspring = sample_with_frequencies(report.model, table, n, rng_);
    evaluate(offspring);
    population_ = std::move(offspring);
    report.schemas = std::move(table);
    return report;
}

StepReport EcgaRun::step_rts(const Population &parents)
{
    const std::size_t n = config_.population_size;
    StepReport report{greedy_model_search(parents, n, config_.model_search), std::nullopt, 0};

    Population offspring = sample_population(report.model, n, rng_);
    evaluate(offspring);
    const RtsConfig rts{config_.rts_window(), config_.rts.ties};
    for (auto &child : offspring)
    {
        if (rts_replace(population_, std::move(child), rts, rng_))
            ++report.replacements;
    }
    return report;
}

GenerationRecord EcgaRun::snapshot(std::string partition) const
{
    GenerationRecord record;
    record.generation = generation_;
    record.shares = market_share(population_, catalog_);
    record.distinct_optima = distinct_optima(population_, catalog_);
    record.best_fitness = population_[0].fitness();
    for (const auto &ind : population_)
        record.best_fitness = std::max(record.best_fitness, ind.fitness());
    record.partition = std::move(partition);
    return record;
}

RunTrace run(const RunConfig &config, const StepObserver &observer)
{
    EcgaRun state(config);
    RunTrace trace;
    trace.records.push_back(state.snapshot());
    for (std::size_t g = 0; g < config.generations; ++g)
    {
        StepReport report = state.step();
        if (observer)
            observer(state, report);
        if (state.generation() % config.record_interval == 0)
            trace.records.push_back(state.snapshot(report.model.signature()));
    }
    trace.evaluations = state.evaluations();
    return trace;
}

} // namespace ecga
