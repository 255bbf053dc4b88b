#pragma once

#include "ecga/core.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ecga
{

enum class TrapVariant
{
    standard_trap, // single peak at all-ones, deceptive attractor at all-zeros
    modified_trap, // equal peaks at all-zeros and all-ones
    bipolar,       // folded trap: peaks at all-zeros and all-ones, attractor at half ones
};

// CLI tokens: "trap", "mtrap", "bipolar".
TrapVariant parse_variant(std::string_view token);
std::string_view variant_token(TrapVariant v);

// Concatenation of m blocks of k bits. Block i occupies genes [i*k, (i+1)*k).
struct ProblemSpec
{
    std::size_t m = 1;
    std::size_t k = 4;
    TrapVariant variant = TrapVariant::modified_trap;

    std::size_t length() const noexcept
    {
        return m * k;
    }

    // Throws UsageError on m < 1, k < 2, or odd/too-small k for bipolar.
    void validate() const;

    static ProblemSpec make(TrapVariant variant, std::size_t m, std::size_t k);
};

// Fitness of one block with u ones.
double block_fitness(std::size_t u, std::size_t k, TrapVariant variant);

double evaluate(const Genome &g, const ProblemSpec &spec);

// Evaluates every member in place.
void evaluate_all(Population &pop, const ProblemSpec &spec);

// Tolerance used when classifying a fitness as globally optimal.
inline constexpr double optimum_tolerance = 1e-9;

// Global optima listed in lexicographic genome order; index = optimum id.
class OptimaCatalog
{
  public:
    OptimaCatalog() = default;
    explicit OptimaCatalog(std::vector<Genome> optima);

    const std::vector<Genome> &optima() const noexcept
    {
        return optima_;
    }
    std::size_t n_opt() const noexcept
    {
        return optima_.size();
    }
    std::optional<std::size_t> index_of(const Genome &g) const;

  private:
    std::vector<Genome> optima_;
    std::unordered_map<Genome, std::size_t, GenomeHash> index_;
};

inline constexpr std::size_t max_enumerable_blocks = 12;

OptimaCatalog enumerate_optima(const ProblemSpec &spec);

// Schema fitness of every configuration of one block under the uniform
// distribution over genomes: block_fitness minus the mean block fitness.
// Indexed by configuration code (lowest gene index is the most significant bit).
std::vector<double> true_schema_fitness(const ProblemSpec &spec, std::size_t block);

} // namespace ecga
