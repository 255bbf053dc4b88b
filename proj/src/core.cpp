#include "ecga/core.hpp"

#include <algorithm>
#include <bit>

namespace ecga
{

namespace
{
std::size_t words_for(std::size_t length)
{
    return (length + 63) / 64;
}
} // namespace

Genome::Genome(std::size_t length) : length_(length), words_(words_for(length), 0)
{
}

Genome Genome::from_string(std::string_view bits)
{
    std::size_t length = 0;
    for (char c : bits)
    {
        if (c == '0' || c == '1')
            ++length;
        else if (c != ' ')
            throw UsageError("genome string may contain only '0', '1' and spaces");
    }
    Genome g(length);
    std::size_t i = 0;
    for (char c : bits)
    {
        if (c == ' ')
            continue;
        g.set(i++, c == '1');
    }
    return g;
}

bool Genome::at(std::size_t i) const
{
    if (i >= length_)
        throw UsageError("gene index out of range");
    return (*this)[i];
}

std::size_t Genome::count_ones() const noexcept
{
    std::size_t ones = 0;
    for (auto w : words_)
        ones += static_cast<std::size_t>(std::popcount(w));
    return ones;
}

std::string Genome::to_string() const
{
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i)
        if ((*this)[i])
            s[i] = '1';
    return s;
}

bool lexicographic_less(const Genome &a, const Genome &b)
{
    const std::size_t common = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < common; ++i)
    {
        if (a[i] != b[i])
            return !a[i];
    }
    return a.size() < b.size();
}

std::size_t GenomeHash::operator()(const Genome &g) const noexcept
{
    std::uint64_t h = splitmix64(g.size());
    for (auto w : g.words())
        h = splitmix64(h ^ w);
    return static_cast<std::size_t>(h);
}

std::size_t hamming_distance(const Genome &a, const Genome &b)
{
    if (a.size() != b.size())
        throw UsageError("hamming_distance: genome lengths differ");
    auto wa = a.words();
    auto wb = b.words();
    std::size_t d = 0;
    for (std::size_t i = 0; i < wa.size(); ++i)
        d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    return d;
}

double Individual::fitness() const
{
    if (!fitness_)
        throw UsageError("fitness read from an unevaluated individual");
    return *fitness_;
}

Population::Population(std::size_t genome_length, std::vector<Individual> members)
    : genome_length_(genome_length), members_(std::move(members))
{
    for (const auto &ind : members_)
        if (ind.genome().size() != genome_length_)
            throw UsageError("population members must share one genome length");
}

void Population::push_back(Individual ind)
{
    if (ind.genome().size() != genome_length_)
        throw UsageError("population members must share one genome length");
    members_.push_back(std::move(ind));
}

void Population::replace(std::size_t slot, Individual ind)
{
    if (slot >= members_.size())
        throw UsageError("population slot out of range");
    if (ind.genome().size() != genome_length_)
        throw UsageError("population members must share one genome length");
    members_[slot] = std::move(ind);
}

bool Population::all_evaluated() const noexcept
{
    return std::all_of(members_.begin(), members_.end(), [](const Individual &i) { return i.evaluated(); });
}

double Population::mean_fitness() const
{
    if (members_.empty())
        throw UsageError("mean fitness of an empty population");
    double sum = 0.0;
    for (const auto &ind : members_)
        sum += ind.fitness();
    return sum / static_cast<double>(members_.size());
}

bool operator==(const Population &a, const Population &b)
{
    if (a.genome_length_ != b.genome_length_ || a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const auto &x = a.members_[i];
        const auto &y = b.members_[i];
        if (x.genome() != y.genome() || x.evaluated() != y.evaluated())
            return false;
        if (x.evaluated() && x.fitness() != y.fitness())
            return false;
    }
    return true;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream)))
{
}

std::size_t RandomSource::uniform_index(std::size_t bound)
{
    if (bound == 0)
        throw UsageError("uniform_index: empty range");
    // Lemire's nearly divisionless rejection method.
    const auto range = static_cast<std::uint64_t>(bound);
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range)
    {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold)
        {
            m = static_cast<unsigned __int128>(engine_()) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

Genome random_genome(std::size_t length, RandomSource &rng)
{
    if (length == 0)
        throw UsageError("random_genome: length must be at least 1");
    Genome g(length);
    auto words = g.mutable_words();
    for (auto &w : words)
        w = rng.next_u64();
    if (const std::size_t tail = length & 63; tail != 0)
        words.back() &= (std::uint64_t{1} << tail) - 1;
    return g;
}

} // namespace ecga
