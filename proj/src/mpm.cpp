#include "ecga/mpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ecga
{

std::uint64_t configuration_of(const Genome &g, const GeneGroup &group)
{
    std::uint64_t code = 0;
    for (std::size_t gene : group)
        code = (code << 1) | (g[gene] ? 1U : 0U);
    return code;
}

void write_configuration(Genome &g, const GeneGroup &group, std::uint64_t code)
{
    const std::size_t k = group.size();
    for (std::size_t t = 0; t < k; ++t)
        g.set(group[t], (code >> (k - 1 - t)) & 1U);
}

std::vector<GeneGroup> canonical_groups(std::vector<GeneGroup> groups)
{
    for (auto &g : groups)
        std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(), [](const GeneGroup &a, const GeneGroup &b) {
        if (a.empty() || b.empty())
            return a.size() < b.size();
        return a.front() < b.front();
    });
    return groups;
}

void check_partition(const std::vector<GeneGroup> &groups, std::size_t length)
{
    std::vector<char> seen(length, 0);
    std::size_t covered = 0;
    for (const auto &group : groups)
    {
        if (group.empty())
            throw UsageError("partition contains an empty group");
        for (std::size_t gene : group)
        {
            if (gene >= length)
                throw UsageError("partition gene index out of range");
            if (seen[gene])
                throw UsageError("partition groups overlap");
            seen[gene] = 1;
            ++covered;
        }
    }
    if (covered != length)
        throw UsageError("partition does not cover every gene");
}

PartitionModel::PartitionModel(std::size_t genome_length, std::vector<GeneGroup> groups,
                               std::vector<std::vector<double>> marginals)
    : genome_length_(genome_length)
{
    if (groups.size() != marginals.size())
        throw UsageError("one marginal table per group is required");
    check_partition(groups, genome_length);

    for (std::size_t i = 0; i < groups.size(); ++i)
    {
        const auto &group = groups[i];
        if (!std::is_sorted(group.begin(), group.end()))
            throw UsageError("group genes must be listed in ascending order");
        if (group.size() > max_table_bits)
            throw UsageError("group too large for a marginal table");
        const auto &table = marginals[i];
        if (table.size() != (std::size_t{1} << group.size()))
            throw UsageError("marginal table length must be 2^k");
        double sum = 0.0;
        for (double p : table)
        {
            if (!(p >= 0.0))
                throw UsageError("marginal probabilities must be non-negative");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw UsageError("marginal table must sum to 1");
    }

    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return groups[a].front() < groups[b].front(); });
    groups_.reserve(groups.size());
    marginals_.reserve(groups.size());
    for (std::size_t i : order)
    {
        groups_.push_back(std::move(groups[i]));
        marginals_.push_back(std::move(marginals[i]));
    }
}

std::size_t PartitionModel::table_entries() const noexcept
{
    std::size_t total = 0;
    for (const auto &t : marginals_)
        total += t.size();
    return total;
}

std::string groups_signature(const std::vector<GeneGroup> &groups)
{
    std::ostringstream out;
    for (const auto &group : groups)
    {
        out << '[';
        for (std::size_t t = 0; t < group.size(); ++t)
        {
            if (t > 0)
                out << ',';
            out << group[t];
        }
        out << ']';
    }
    return out.str();
}

std::string PartitionModel::signature() const
{
    return groups_signature(groups_);
}

double entropy_bits(std::span<const double> p)
{
    double h = 0.0;
    for (double x : p)
        if (x > 0.0)
            h -= x * std::log2(x);
    return h;
}

double model_complexity(const std::vector<GeneGroup> &groups, std::size_t n)
{
    if (n < 2)
        throw UsageError("model_complexity: population size must be at least 2");
    double parameters = 0.0;
    for (const auto &g : groups)
        parameters += std::ldexp(1.0, static_cast<int>(g.size())) - 1.0;
    return std::log2(static_cast<double>(n)) * parameters;
}

double model_complexity(const PartitionModel &model, std::size_t n)
{
    return model_complexity(model.groups(), n);
}

PartitionModel estimate_marginals(std::vector<GeneGroup> groups, const Population &pop)
{
    if (pop.empty())
        throw UsageError("estimate_marginals: empty population");
    groups = canonical_groups(std::move(groups));
    check_partition(groups, pop.genome_length());

    std::vector<std::vector<double>> tables;
    tables.reserve(groups.size());
    const double inv_n = 1.0 / static_cast<double>(pop.size());
    for (const auto &group : groups)
    {
        if (group.size() > max_table_bits)
            throw UsageError("group too large for a marginal table");
        std::vector<std::size_t> counts(std::size_t{1} << group.size(), 0);
        for (const auto &ind : pop)
            ++counts[configuration_of(ind.genome(), group)];
        std::vector<double> table(counts.size());
        for (std::size_t j = 0; j < counts.size(); ++j)
            table[j] = static_cast<double>(counts[j]) * inv_n;
        tables.push_back(std::move(table));
    }
    return PartitionModel(pop.genome_length(), std::move(groups), std::move(tables));
}

double compressed_population_complexity(const PartitionModel &model, const Population &selected)
{
    if (selected.empty())
        throw UsageError("compressed_population_complexity: empty population");
    const PartitionModel counted = estimate_marginals(model.groups(), selected);
    double h = 0.0;
    for (const auto &table : counted.marginals())
        h += entropy_bits(table);
    return static_cast<double>(selected.size()) * h;
}

MdlScore mdl_score(const std::vector<GeneGroup> &groups, const Population &selected)
{
    const PartitionModel model = estimate_marginals(groups, selected);
    return {model_complexity(model, selected.size()), compressed_population_complexity(model, selected)};
}

namespace
{

// Per-individual configuration codes of one candidate group. Codes of a
// merged group are concatenations, which is a bijection of the true
// configuration index and so leaves the entropy unchanged.
struct SearchGroup
{
    GeneGroup genes;
    std::vector<std::uint64_t> codes;
    double entropy = 0.0;
    bool alive = true;
};

class EntropyCounter
{
  public:
    explicit EntropyCounter(std::size_t n) : n_(n), c_log_c_(n + 1, 0.0), dense_(std::size_t{1} << dense_bits, 0)
    {
        for (std::size_t c = 2; c <= n; ++c)
            c_log_c_[c] = static_cast<double>(c) * std::log2(static_cast<double>(c));
        log_n_ = std::log2(static_cast<double>(n));
    }

    // Entropy (bits) of the empirical distribution of `codes`, which use `bits` bits.
    double entropy(std::span<const std::uint64_t> codes, std::size_t bits)
    {
        double sum = 0.0;
        if (bits <= dense_bits)
        {
            touched_.clear();
            for (auto c : codes)
            {
                if (dense_[c]++ == 0)
                    touched_.push_back(c);
            }
            for (auto c : touched_)
            {
                sum += c_log_c_[dense_[c]];
                dense_[c] = 0;
            }
        }
        else
        {
            sorted_.assign(codes.begin(), codes.end());
            std::sort(sorted_.begin(), sorted_.end());
            std::size_t run = 0;
            for (std::size_t i = 0; i < sorted_.size(); ++i)
            {
                ++run;
                if (i + 1 == sorted_.size() || sorted_[i + 1] != sorted_[i])
                {
                    sum += c_log_c_[run];
                    run = 0;
                }
            }
        }
        return log_n_ - sum / static_cast<double>(n_);
    }

  private:
    static constexpr std::size_t dense_bits = 12;
    std::size_t n_;
    double log_n_ = 0.0;
    std::vector<double> c_log_c_;
    std::vector<std::uint32_t> dense_;
    std::vector<std::uint64_t> touched_;
    std::vector<std::uint64_t> sorted_;
};

std::vector<std::uint64_t> merge_codes(const SearchGroup &a, const SearchGroup &b)
{
    const std::size_t shift = b.genes.size();
    std::vector<std::uint64_t> merged(a.codes.size());
    for (std::size_t x = 0; x < merged.size(); ++x)
        merged[x] = (a.codes[x] << shift) | b.codes[x];
    return merged;
}

} // namespace

PartitionModel greedy_model_search(const Population &selected, std::size_t n, const ModelSearchOptions &options)
{
    if (selected.empty())
        throw UsageError("greedy_model_search: empty population");
    if (n < 2)
        throw UsageError("greedy_model_search: population size must be at least 2");

    const std::size_t length = selected.genome_length();
    const std::size_t members = selected.size();
    const double log_n = std::log2(static_cast<double>(n));
    const double weight = static_cast<double>(n);
    const std::size_t cap = options.max_group_size == 0 ? length : options.max_group_size;
    constexpr double infinity = std::numeric_limits<double>::infinity();

    EntropyCounter counter(members);

    // Slot s holds the group whose smallest gene is s, so iterating live slots
    // in ascending order visits groups in their canonical order.
    std::vector<SearchGroup> slots(length);
    for (std::size_t s = 0; s < length; ++s)
    {
        slots[s].genes = {s};
        slots[s].codes.resize(members);
        for (std::size_t x = 0; x < members; ++x)
            slots[s].codes[x] = selected[x].genome()[s] ? 1U : 0U;
        slots[s].entropy = counter.entropy(slots[s].codes, 1);
    }

    auto merge_delta = [&](const SearchGroup &a, const SearchGroup &b) {
        const std::size_t ka = a.genes.size();
        const std::size_t kb = b.genes.size();
        if (ka + kb > cap || ka + kb > 63)
            return infinity;
        const double delta_model =
            log_n * (std::ldexp(1.0, static_cast<int>(ka + kb)) - std::ldexp(1.0, static_cast<int>(ka)) -
                     std::ldexp(1.0, static_cast<int>(kb)) + 1.0);
        // H(ab) >= max(H(a), H(b)), so the population term can fall by at most
        // weight * min(H(a), H(b)). Skip counting when that cannot pay for the model.
        if (delta_model - weight * std::min(a.entropy, b.entropy) >= -merge_threshold_bits)
            return infinity;
        const auto merged = merge_codes(a, b);
        const double h = counter.entropy(merged, ka + kb);
        return delta_model + weight * (h - a.entropy - b.entropy);
    };

    std::vector<double> delta(length * length, infinity);
    for (std::size_t i = 0; i < length; ++i)
        for (std::size_t j = i + 1; j < length; ++j)
            delta[i * length + j] = merge_delta(slots[i], slots[j]);

    while (true)
    {
        double best = infinity;
        std::size_t best_i = 0;
        std::size_t best_j = 0;
        for (std::size_t i = 0; i < length; ++i)
        {
            if (!slots[i].alive)
                continue;
            for (std::size_t j = i + 1; j < length; ++j)
            {
                if (!slots[j].alive)
                    continue;
                if (delta[i * length + j] < best)
                {
                    best = delta[i * length + j];
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (!(best < -merge_threshold_bits))
            break;

        SearchGroup &into = slots[best_i];
        SearchGroup &from = slots[best_j];
        into.codes = merge_codes(into, from);
        into.genes.insert(into.genes.end(), from.genes.begin(), from.genes.end());
        into.entropy = counter.entropy(into.codes, into.genes.size());
        from.alive = false;
        from.codes.clear();
        from.codes.shrink_to_fit();

        for (std::size_t x = 0; x < length; ++x)
        {
            if (x == best_i || !slots[x].alive)
                continue;
            const std::size_t lo = std::min(x, best_i);
            const std::size_t hi = std::max(x, best_i);
            delta[lo * length + hi] = merge_delta(slots[lo], slots[hi]);
        }
    }

    std::vector<GeneGroup> groups;
    for (auto &slot : slots)
        if (slot.alive)
            groups.push_back(std::move(slot.genes));
    return estimate_marginals(std::move(groups), selected);
}

namespace
{

class TableSampler
{
  public:
    explicit TableSampler(const std::vector<double> &table) : cumulative_(table.size())
    {
        double running = 0.0;
        for (std::size_t j = 0; j < table.size(); ++j)
        {
            running += table[j];
            cumulative_[j] = running;
            if (table[j] > 0.0)
                last_positive_ = j;
        }
    }

    std::uint64_t draw(RandomSource &rng) const
    {
        const double u = rng.uniform01() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        auto j = static_cast<std::size_t>(it - cumulative_.begin());
        return j > last_positive_ ? last_positive_ : j;
    }

  private:
    std::vector<double> cumulative_;
    std::size_t last_positive_ = 0;
};

} // namespace

Population sample_population(const PartitionModel &model, std::size_t count, RandomSource &rng)
{
    std::vector<TableSampler> samplers;
    samplers.reserve(model.group_count());
    for (const auto &table : model.marginals())
        samplers.emplace_back(table);

    Population out(model.genome_length());
    out.reserve(count);
    for (std::size_t x = 0; x < count; ++x)
    {
        Genome g(model.genome_length());
        for (std::size_t i = 0; i < model.group_count(); ++i)
            write_configuration(g, model.groups()[i], samplers[i].draw(rng));
        out.push_back(Individual(std::move(g)));
    }
    return out;
}

} // namespace ecga
