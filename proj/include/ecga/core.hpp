#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ecga
{

// Raised for violated preconditions. The CLI maps it to exit code 2.
class UsageError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Fixed-length binary string. Bits are packed 64 per word; bits past size()
// in the last word are always zero so that word-wise equality and popcount
// operate on logical bits only.
class Genome
{
  public:
    Genome() = default;
    explicit Genome(std::size_t length);

    // Parses a string of '0'/'1' characters. Spaces are ignored.
    static Genome from_string(std::string_view bits);

    std::size_t size() const noexcept
    {
        return length_;
    }

    bool operator[](std::size_t i) const noexcept
    {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }

    bool at(std::size_t i) const;
    void set(std::size_t i, bool value) noexcept
    {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::span<const std::uint64_t> words() const noexcept
    {
        return words_;
    }
    std::span<std::uint64_t> mutable_words() noexcept
    {
        return words_;
    }

    std::size_t count_ones() const noexcept;
    std::string to_string() const;

    friend bool operator==(const Genome &a, const Genome &b) = default;

  private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

// Lexicographic order over the logical bit string (gene 0 first, '0' < '1').
bool lexicographic_less(const Genome &a, const Genome &b);

struct GenomeHash
{
    std::size_t operator()(const Genome &g) const noexcept;
};

std::size_t hamming_distance(const Genome &a, const Genome &b);

class Individual
{
  public:
    Individual() = default;
    explicit Individual(Genome genome) : genome_(std::move(genome))
    {
    }
    Individual(Genome genome, double fitness) : genome_(std::move(genome)), fitness_(fitness)
    {
    }

    const Genome &genome() const noexcept
    {
        return genome_;
    }
    bool evaluated() const noexcept
    {
        return fitness_.has_value();
    }
    // Throws UsageError when the individual has not been evaluated.
    double fitness() const;
    void set_fitness(double f) noexcept
    {
        fitness_ = f;
    }

  private:
    Genome genome_;
    std::optional<double> fitness_;
};

// Ordered multiset of individuals sharing one genome length.
class Population
{
  public:
    Population() = default;
    explicit Population(std::size_t genome_length) : genome_length_(genome_length)
    {
    }
    Population(std::size_t genome_length, std::vector<Individual> members);

    std::size_t size() const noexcept
    {
        return members_.size();
    }
    bool empty() const noexcept
    {
        return members_.empty();
    }
    std::size_t genome_length() const noexcept
    {
        return genome_length_;
    }

    void reserve(std::size_t n)
    {
        members_.reserve(n);
    }
    void push_back(Individual ind);
    void replace(std::size_t slot, Individual ind);

    const Individual &operator[](std::size_t i) const noexcept
    {
        return members_[i];
    }
    Individual &operator[](std::size_t i) noexcept
    {
        return members_[i];
    }

    auto begin() const noexcept
    {
        return members_.begin();
    }
    auto end() const noexcept
    {
        return members_.end();
    }
    auto begin() noexcept
    {
        return members_.begin();
    }
    auto end() noexcept
    {
        return members_.end();
    }

    bool all_evaluated() const noexcept;
    double mean_fitness() const;

    friend bool operator==(const Population &a, const Population &b);

  private:
    std::size_t genome_length_ = 0;
    std::vector<Individual> members_;
};

// Deterministic random stream keyed by (seed, stream id). The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distributions below are implemented here because the std:: ones are not
// reproducible across standard library implementations.
class RandomSource
{
  public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const noexcept
    {
        return seed_;
    }
    std::uint64_t stream() const noexcept
    {
        return stream_;
    }

    std::uint64_t next_u64()
    {
        return engine_();
    }
    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    // Uniform on {0, ..., bound - 1}; bound must be positive.
    std::size_t uniform_index(std::size_t bound);
    bool coin()
    {
        return (engine_() >> 63) != 0;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

Genome random_genome(std::size_t length, RandomSource &rng);

} // namespace ecga
