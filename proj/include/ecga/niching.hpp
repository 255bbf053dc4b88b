#pragma once

#include "ecga/core.hpp"
#include "ecga/mpm.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ecga
{

// Schemata of one linkage group: one entry per configuration code.
struct SchemaGroup
{
    GeneGroup genes;
    std::vector<double> fitness;     // carrier mean minus baseline; 0 when absent
    std::vector<std::size_t> support; // number of carriers
    std::vector<double> frequency;   // sampling frequency, filled by proportionate_frequencies
};

struct SchemaTable
{
    std::size_t genome_length = 0;
    std::vector<SchemaGroup> groups;

    // Sum over groups of 2^k_i.
    std::size_t schema_count() const noexcept;
};

// Schema fitness over the model's partition: the mean fitness of the
// individuals carrying each configuration minus `baseline`. The baseline
// defaults to the mean fitness of `evaluated`. Schemata with no carrier get
// fitness 0.
SchemaTable estimate_schema_fitness(const PartitionModel &model, const Population &evaluated,
                                    std::optional<double> baseline = std::nullopt);

// Fitness-proportionate sampling frequencies. Negative schema fitness is
// clamped to 0 before normalising; a group whose clamped fitness sums to 0
// falls back to the uniform distribution.
SchemaTable proportionate_frequencies(SchemaTable table);

// sample_population with the table's frequencies in place of the model's marginals.
Population sample_with_frequencies(const PartitionModel &model, const SchemaTable &table, std::size_t count,
                                   RandomSource &rng);

enum class TiePolicy
{
    replace_on_tie,
    keep_on_tie,
};

struct RtsConfig
{
    std::size_t window = 0;
    TiePolicy ties = TiePolicy::replace_on_tie;
};

// Restricted tournament replacement. Draws `window` distinct members
// uniformly, picks the one nearest to the offspring in Hamming distance
// (lowest population index on ties) and lets the offspring replace it when
// fitter, or when equally fit under replace_on_tie. Returns the replaced slot.
std::optional<std::size_t> rts_replace(Population &pop, Individual offspring, const RtsConfig &config,
                                       RandomSource &rng);

// `count` distinct indices drawn uniformly from [0, n), in ascending order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, RandomSource &rng);

} // namespace ecga
