#pragma once

#include "ecga/core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ecga
{

// Gene indices of one linkage group, ascending.
using GeneGroup = std::vector<std::size_t>;

// Largest group for which a full marginal table is materialised.
inline constexpr std::size_t max_table_bits = 20;

// Configuration code of a group inside a genome. The group's lowest gene
// index is the most significant bit, so code order equals lexicographic
// order of the group's substring.
std::uint64_t configuration_of(const Genome &g, const GeneGroup &group);

// Writes configuration `code` of `group` into `g`.
void write_configuration(Genome &g, const GeneGroup &group, std::uint64_t code);

// Sorts genes within groups and orders groups by their smallest gene.
std::vector<GeneGroup> canonical_groups(std::vector<GeneGroup> groups);

// Throws UsageError unless `groups` is a partition of [0, length).
void check_partition(const std::vector<GeneGroup> &groups, std::size_t length);

// Marginal product model: disjoint gene groups covering the genome, each
// with a full probability table over its 2^k configurations.
class PartitionModel
{
  public:
    PartitionModel() = default;
    // Groups must have ascending genes; they are reordered by smallest gene
    // together with their tables. Tables must have 2^k non-negative entries
    // summing to 1 within 1e-9.
    PartitionModel(std::size_t genome_length, std::vector<GeneGroup> groups,
                   std::vector<std::vector<double>> marginals);

    std::size_t genome_length() const noexcept
    {
        return genome_length_;
    }
    std::size_t group_count() const noexcept
    {
        return groups_.size();
    }
    const std::vector<GeneGroup> &groups() const noexcept
    {
        return groups_;
    }
    const std::vector<std::vector<double>> &marginals() const noexcept
    {
        return marginals_;
    }

    // Total number of table entries, sum over groups of 2^k_i.
    std::size_t table_entries() const noexcept;

    // "[0,1,2,3][4,5,6,7]"
    std::string signature() const;

  private:
    std::size_t genome_length_ = 0;
    std::vector<GeneGroup> groups_;
    std::vector<std::vector<double>> marginals_;
};

std::string groups_signature(const std::vector<GeneGroup> &groups);

// Entropy in bits with 0 log 0 = 0.
double entropy_bits(std::span<const double> p);

struct MdlScore
{
    double model_complexity = 0.0;
    double population_complexity = 0.0;

    double total() const noexcept
    {
        return model_complexity + population_complexity;
    }
};

// log2(n) * sum_i (2^k_i - 1)
double model_complexity(const std::vector<GeneGroup> &groups, std::size_t n);
double model_complexity(const PartitionModel &model, std::size_t n);

// n * sum_i H(group i), with frequencies counted over `selected` and
// n = selected.size().
double compressed_population_complexity(const PartitionModel &model, const Population &selected);

MdlScore mdl_score(const std::vector<GeneGroup> &groups, const Population &selected);

// Frequency of each group configuration among the members of `pop`.
PartitionModel estimate_marginals(std::vector<GeneGroup> groups, const Population &pop);

struct ModelSearchOptions
{
    // Largest group the search may form; 0 means no cap.
    std::size_t max_group_size = 0;
};

// A merge is accepted only if it lowers the total score by more than this.
inline constexpr double merge_threshold_bits = 1e-9;

// Greedy MDL partition search starting from all singletons. Each iteration
// merges the pair of groups with the largest strict decrease of the total
// score (ties to the lexicographically smallest pair of group positions,
// groups ordered by smallest gene). `n` is the population size entering both
// complexity terms.
PartitionModel greedy_model_search(const Population &selected, std::size_t n,
                                   const ModelSearchOptions &options = {});

// Draws each offspring group by group, independently, from the model tables.
Population sample_population(const PartitionModel &model, std::size_t count, RandomSource &rng);

} // namespace ecga
