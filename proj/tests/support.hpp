#pragma once

#include "ecga/core.hpp"
#include "ecga/mpm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace test_support
{

inline ecga::Population population_of(const std::vector<std::string> &genomes)
{
    ecga::Population pop(ecga::Genome::from_string(genomes.front()).size());
    for (const auto &g : genomes)
        pop.push_back(ecga::Individual(ecga::Genome::from_string(g)));
    return pop;
}

inline ecga::Population population_of(const std::vector<std::string> &genomes, const std::vector<double> &fitness)
{
    ecga::Population pop(ecga::Genome::from_string(genomes.front()).size());
    for (std::size_t i = 0; i < genomes.size(); ++i)
        pop.push_back(ecga::Individual(ecga::Genome::from_string(genomes[i]), fitness[i]));
    return pop;
}

// Every set partition of {0, ..., n-1}, via restricted growth strings.
inline std::vector<std::vector<ecga::GeneGroup>> all_partitions(std::size_t n)
{
    std::vector<std::vector<ecga::GeneGroup>> out;
    std::vector<std::size_t> label(n, 0);
    while (true)
    {
        std::size_t blocks = 0;
        for (auto l : label)
            blocks = std::max(blocks, l + 1);
        std::vector<ecga::GeneGroup> groups(blocks);
        for (std::size_t i = 0; i < n; ++i)
            groups[label[i]].push_back(i);
        out.push_back(groups);

        // next restricted growth string
        std::size_t i = n;
        while (i-- > 1)
        {
            std::size_t prefix_max = 0;
            for (std::size_t j = 0; j < i; ++j)
                prefix_max = std::max(prefix_max, label[j]);
            if (label[i] <= prefix_max)
            {
                ++label[i];
                for (std::size_t j = i + 1; j < n; ++j)
                    label[j] = 0;
                break;
            }
        }
        if (i == 0)
            break;
    }
    return out;
}

// Reference MDL score written straight from the definitions, sharing no code
// with the library: counts joint configurations with std::string keys.
inline double reference_mdl(const std::vector<ecga::GeneGroup> &groups, const ecga::Population &pop)
{
    const double n = static_cast<double>(pop.size());
    double model = 0.0;
    double data = 0.0;
    for (const auto &group : groups)
    {
        model += std::log2(n) * (std::pow(2.0, static_cast<double>(group.size())) - 1.0);
        std::map<std::string, double> counts;
        for (const auto &ind : pop)
        {
            std::string key;
            for (auto gene : group)
                key.push_back(ind.genome()[gene] ? '1' : '0');
            counts[key] += 1.0;
        }
        for (const auto &[key, c] : counts)
        {
            const double p = c / n;
            data -= n * p * std::log2(p);
        }
    }
    return model + data;
}

} // namespace test_support
