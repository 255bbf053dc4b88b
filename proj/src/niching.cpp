#include "ecga/niching.hpp"

#include <algorithm>
#include <limits>

namespace ecga
{

std::size_t SchemaTable::schema_count() const noexcept
{
    std::size_t total = 0;
    for (const auto &g : groups)
        total += g.fitness.size();
    return total;
}

SchemaTable estimate_schema_fitness(const PartitionModel &model, const Population &evaluated,
                                    std::optional<double> baseline)
{
    if (evaluated.empty())
        throw UsageError("estimate_schema_fitness: empty population");
    if (evaluated.genome_length() != model.genome_length())
        throw UsageError("estimate_schema_fitness: model does not cover the genome");
    if (!evaluated.all_evaluated())
        throw UsageError("estimate_schema_fitness: population has unevaluated members");

    const double reference = baseline ? *baseline : evaluated.mean_fitness();

    SchemaTable table;
    table.genome_length = model.genome_length();
    table.groups.reserve(model.group_count());
    for (const auto &genes : model.groups())
    {
        const std::size_t configs = std::size_t{1} << genes.size();
        SchemaGroup group{genes, std::vector<double>(configs, 0.0), std::vector<std::size_t>(configs, 0), {}};
        std::vector<double> sums(configs, 0.0);
        for (const auto &ind : evaluated)
        {
            const auto code = configuration_of(ind.genome(), genes);
            sums[code] += ind.fitness();
            ++group.support[code];
        }
        for (std::size_t j = 0; j < configs; ++j)
        {
            if (group.support[j] > 0)
                group.fitness[j] = sums[j] / static_cast<double>(group.support[j]) - reference;
        }
        table.groups.push_back(std::move(group));
    }
    return table;
}

SchemaTable proportionate_frequencies(SchemaTable table)
{
    for (auto &group : table.groups)
    {
        const std::size_t configs = group.fitness.size();
        group.frequency.assign(configs, 0.0);
        double mass = 0.0;
        for (std::size_t j = 0; j < configs; ++j)
        {
            group.frequency[j] = std::max(group.fitness[j], 0.0);
            mass += group.frequency[j];
        }
        if (mass > 0.0)
        {
            for (auto &p : group.frequency)
                p /= mass;
        }
        else
        {
            std::fill(group.frequency.begin(), group.frequency.end(), 1.0 / static_cast<double>(configs));
        }
    }
    return table;
}

Population sample_with_frequencies(const PartitionModel &model, const SchemaTable &table, std::size_t count,
                                   RandomSource &rng)
{
    if (table.genome_length != model.genome_length() || table.groups.size() != model.group_count())
        throw UsageError("sample_with_frequencies: schema table does not match the model");
    std::vector<std::vector<double>> frequencies;
    frequencies.reserve(table.groups.size());
    for (std::size_t i = 0; i < table.groups.size(); ++i)
    {
        const auto &group = table.groups[i];
        if (group.genes != model.groups()[i])
            throw UsageError("sample_with_frequencies: schema table does not match the model");
        if (group.frequency.size() != group.fitness.size())
            throw UsageError("sample_with_frequencies: frequencies have not been computed");
        frequencies.push_back(group.frequency);
    }
    const PartitionModel overridden(model.genome_length(), model.groups(), std::move(frequencies));
    return sample_population(overridden, count, rng);
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, RandomSource &rng)
{
    if (count > n)
        throw UsageError("cannot draw more distinct members than the population holds");
    // Floyd's algorithm.
    std::vector<std::size_t> chosen;
    chosen.reserve(count);
    std::vector<char> marked;
    const bool use_marks = count > 64;
    if (use_marks)
        marked.assign(n, 0);
    auto contains = [&](std::size_t v) {
        if (use_marks)
            return marked[v] != 0;
        return std::find(chosen.begin(), chosen.end(), v) != chosen.end();
    };
    for (std::size_t j = n - count; j < n; ++j)
    {
        std::size_t t = rng.uniform_index(j + 1);
        if (contains(t))
            t = j;
        chosen.push_back(t);
        if (use_marks)
            marked[t] = 1;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

std::optional<std::size_t> rts_replace(Population &pop, Individual offspring, const RtsConfig &config,
                                       RandomSource &rng)
{
    if (pop.empty())
        throw UsageError("rts_replace: empty population");
    if (config.window == 0 || config.window > pop.size())
        throw UsageError("rts_replace: window must lie in [1, population size]");
    if (!offspring.evaluated())
        throw UsageError("rts_replace: offspring must be evaluated");

    const auto window = sample_without_replacement(pop.size(), config.window, rng);
    std::size_t nearest = window.front();
    std::size_t nearest_distance = std::numeric_limits<std::size_t>::max();
    for (std::size_t slot : window)
    {
        const std::size_t d = hamming_distance(pop[slot].genome(), offspring.genome());
        if (d < nearest_distance)
        {
            nearest_distance = d;
            nearest = slot;
        }
    }

    const double incumbent = pop[nearest].fitness();
    const double challenger = offspring.fitness();
    const bool wins = challenger > incumbent ||
                      (challenger == incumbent && config.ties == TiePolicy::replace_on_tie);
    if (!wins)
        return std::nullopt;
    pop.replace(nearest, std::move(offspring));
    return nearest;
}

} // namespace ecga
