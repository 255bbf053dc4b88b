#include "ecga/problems.hpp"

#include <bit>
#include <cstdlib>

namespace ecga
{

TrapVariant parse_variant(std::string_view token)
{
    if (token == "trap")
        return TrapVariant::standard_trap;
    if (token == "mtrap")
        return TrapVariant::modified_trap;
    if (token == "bipolar")
        return TrapVariant::bipolar;
    throw UsageError("unknown problem '" + std::string(token) + "' (expected trap, mtrap or bipolar)");
}

std::string_view variant_token(TrapVariant v)
{
    switch (v)
    {
    case TrapVariant::standard_trap:
        return "trap";
    case TrapVariant::modified_trap:
        return "mtrap";
    case TrapVariant::bipolar:
        return "bipolar";
    }
    return "?";
}

void ProblemSpec::validate() const
{
    if (m < 1)
        throw UsageError("problem needs at least one block (m >= 1)");
    if (k < 2)
        throw UsageError("block size k must be at least 2");
    if (variant == TrapVariant::bipolar)
    {
        if (k % 2 != 0)
            throw UsageError("bipolar blocks need an even k");
        // The folded trap has order k/2 and needs k/2 >= 2 for a finite slope.
        if (k < 4)
            throw UsageError("bipolar blocks need k >= 4");
    }
}

ProblemSpec ProblemSpec::make(TrapVariant variant, std::size_t m, std::size_t k)
{
    ProblemSpec spec{m, k, variant};
    spec.validate();
    return spec;
}

namespace
{
double standard_trap(std::size_t u, std::size_t k)
{
    if (u == k)
        return 1.0;
    return 0.75 * (1.0 - static_cast<double>(u) / static_cast<double>(k - 1));
}
} // namespace

double block_fitness(std::size_t u, std::size_t k, TrapVariant variant)
{
    if (u > k)
        throw UsageError("block_fitness: unitation exceeds block size");
    switch (variant)
    {
    case TrapVariant::standard_trap:
        return standard_trap(u, k);
    case TrapVariant::modified_trap:
        if (u == 0)
            return 1.0;
        return standard_trap(u, k);
    case TrapVariant::bipolar: {
        if (k % 2 != 0 || k < 4)
            throw UsageError("bipolar blocks need an even k >= 4");
        const std::size_t half = k / 2;
        const std::size_t v = u > half ? u - half : half - u;
        return standard_trap(v, half);
    }
    }
    return 0.0;
}

double evaluate(const Genome &g, const ProblemSpec &spec)
{
    if (g.size() != spec.length())
        throw UsageError("evaluate: genome length does not match the problem");
    double total = 0.0;
    for (std::size_t b = 0; b < spec.m; ++b)
    {
        std::size_t u = 0;
        for (std::size_t i = b * spec.k; i < (b + 1) * spec.k; ++i)
            u += g[i] ? 1 : 0;
        total += block_fitness(u, spec.k, spec.variant);
    }
    return total;
}

void evaluate_all(Population &pop, const ProblemSpec &spec)
{
    for (auto &ind : pop)
        ind.set_fitness(evaluate(ind.genome(), spec));
}

OptimaCatalog::OptimaCatalog(std::vector<Genome> optima) : optima_(std::move(optima))
{
    index_.reserve(optima_.size());
    for (std::size_t i = 0; i < optima_.size(); ++i)
        index_.emplace(optima_[i], i);
}

std::optional<std::size_t> OptimaCatalog::index_of(const Genome &g) const
{
    auto it = index_.find(g);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

OptimaCatalog enumerate_optima(const ProblemSpec &spec)
{
    spec.validate();
    if (spec.m > max_enumerable_blocks)
        throw UsageError("enumerate_optima: m exceeds the enumeration cap of 12 blocks");

    std::vector<Genome> optima;
    if (spec.variant == TrapVariant::standard_trap)
    {
        Genome g(spec.length());
        for (std::size_t i = 0; i < g.size(); ++i)
            g.set(i, true);
        optima.push_back(std::move(g));
        return OptimaCatalog(std::move(optima));
    }

    // Every block all-zeros or all-ones. Reading the block choices as a binary
    // number with block 0 most significant yields lexicographic order.
    const std::size_t count = std::size_t{1} << spec.m;
    optima.reserve(count);
    for (std::size_t id = 0; id < count; ++id)
    {
        Genome g(spec.length());
        for (std::size_t b = 0; b < spec.m; ++b)
        {
            const bool ones = (id >> (spec.m - 1 - b)) & 1U;
            if (!ones)
                continue;
            for (std::size_t i = b * spec.k; i < (b + 1) * spec.k; ++i)
                g.set(i, true);
        }
        optima.push_back(std::move(g));
    }
    return OptimaCatalog(std::move(optima));
}

std::vector<double> true_schema_fitness(const ProblemSpec &spec, std::size_t block)
{
    spec.validate();
    if (block >= spec.m)
        throw UsageError("true_schema_fitness: block index out of range");
    if (spec.k >= 8 * sizeof(std::size_t) - 1)
        throw UsageError("true_schema_fitness: block too large to enumerate");
    const std::size_t configs = std::size_t{1} << spec.k;
    std::vector<double> values(configs);
    double mean = 0.0;
    for (std::size_t c = 0; c < configs; ++c)
    {
        values[c] = block_fitness(static_cast<std::size_t>(std::popcount(c)), spec.k, spec.variant);
        mean += values[c];
    }
    mean /= static_cast<double>(configs);
    for (auto &v : values)
        v -= mean;
    return values;
}

} // namespace ecga
