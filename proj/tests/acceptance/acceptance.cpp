// Acceptance suite. Usage: acceptance [A1 ... A8]; no argument runs all.
// Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include "ecga/core.hpp"
#include "ecga/engine.hpp"
#include "ecga/harness.hpp"
#include "ecga/mpm.hpp"
#include "ecga/niching.hpp"
#include "ecga/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace ecga;

namespace
{

constexpr std::uint64_t master_seed = 20050612;
// Tournament size for the niching experiments; binary tournaments leave the
// first model without linkage and the clamp rule then fixes whole blocks.
constexpr std::size_t niching_tournament = 8;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string true_partition(std::size_t m, std::size_t k)
{
    std::vector<GeneGroup> groups(m);
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t t = 0; t < k; ++t)
            groups[b].push_back(b * k + t);
    return groups_signature(groups);
}

RunConfig niching_run(Algorithm algo, std::size_t n, std::size_t generations)
{
    RunConfig cfg;
    cfg.problem = ProblemSpec::make(TrapVariant::modified_trap, 5, 4);
    cfg.algo = algo;
    cfg.population_size = n;
    cfg.generations = generations;
    cfg.selection.tournament_size = niching_tournament;
    cfg.seed = master_seed;
    return cfg;
}

// ---------------------------------------------------------------------------

Outcome model_recovery()
{
    const std::size_t runs = 50;
    const std::string expected = true_partition(10, 4);
    std::vector<int> recovered(runs, 0);
    std::vector<int> at_ten(runs, 0);
    parallel_for(runs, 0, [&](std::size_t r) {
        RunConfig cfg;
        cfg.problem = ProblemSpec::make(TrapVariant::standard_trap, 10, 4);
        cfg.algo = Algorithm::rts;
        cfg.population_size = 6400;
        cfg.generations = 10;
        cfg.selection.tournament_size = 2;
        cfg.seed = master_seed;
        cfg.stream = r;
        run(cfg, [&](const EcgaRun &state, const StepReport &report) {
            if (report.model.signature() == expected)
            {
                recovered[r] = 1;
                if (state.generation() == 10)
                    at_ten[r] = 1;
            }
        });
    });
    const int hits = std::accumulate(recovered.begin(), recovered.end(), 0);
    const int final_hits = std::accumulate(at_ten.begin(), at_ten.end(), 0);
    return {hits >= 45, std::to_string(hits) + "/50 runs recovered the 10 blocks by generation 10 (" +
                            std::to_string(final_hits) + "/50 hold them at generation 10); need >= 45"};
}

Outcome schema_fitness_oracle()
{
    RandomSource rng(master_seed, 2);
    double worst = 0.0;
    std::size_t absent = 0;
    std::size_t absent_bad = 0;
    std::size_t schemas = 0;
    for (int instance = 0; instance < 200; ++instance)
    {
        const std::size_t len = 1 + rng.uniform_index(12);
        const std::size_t n = 1 + rng.uniform_index(200);
        Population pop(len);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double f = rng.uniform01() * 20.0 - 5.0;
            total += f;
            pop.push_back(Individual(random_genome(len, rng), f));
        }
        const double mean = total / static_cast<double>(n);

        std::vector<GeneGroup> groups;
        for (std::size_t gene = 0; gene < len; ++gene)
        {
            const std::size_t slot = rng.uniform_index(groups.size() + 1);
            if (slot == groups.size())
                groups.push_back({gene});
            else
                groups[slot].push_back(gene);
        }
        std::vector<std::vector<double>> tables;
        for (const auto &g : groups)
            tables.emplace_back(std::size_t{1} << g.size(), 1.0 / static_cast<double>(std::size_t{1} << g.size()));
        const PartitionModel model(len, groups, tables);
        const SchemaTable table = estimate_schema_fitness(model, pop);

        for (const auto &sg : table.groups)
        {
            // carrier sums keyed by the substring at the group's genes
            std::map<std::string, std::pair<double, std::size_t>> sums;
            for (const auto &ind : pop)
            {
                std::string key;
                for (auto gene : sg.genes)
                    key.push_back(ind.genome()[gene] ? '1' : '0');
                sums[key].first += ind.fitness();
                sums[key].second += 1;
            }
            const std::size_t k = sg.genes.size();
            for (std::size_t c = 0; c < sg.fitness.size(); ++c)
            {
                ++schemas;
                std::string key;
                for (std::size_t b = k; b-- > 0;)
                    key.push_back((c >> b) & 1U ? '1' : '0');
                const auto it = sums.find(key);
                if (it == sums.end())
                {
                    ++absent;
                    if (sg.fitness[c] != 0.0)
                        ++absent_bad;
                    continue;
                }
                const double oracle = it->second.first / static_cast<double>(it->second.second) - mean;
                worst = std::max(worst, std::abs(sg.fitness[c] - oracle));
            }
        }
    }
    const bool pass = worst <= 1e-12 && absent_bad == 0;
    std::ostringstream s;
    s << schemas << " schemata over 200 instances, max |error| = " << worst << " (tol 1e-12), " << absent
      << " absent schemata, " << absent_bad << " not reported as 0";
    return {pass, s.str()};
}

Outcome frequency_verification()
{
    struct Case
    {
        std::string name;
        ProblemSpec spec;
    };
    const std::vector<Case> cases = {
        {"trap 10-4", ProblemSpec::make(TrapVariant::standard_trap, 10, 4)},
        {"trap 5-5", ProblemSpec::make(TrapVariant::standard_trap, 5, 5)},
        {"bipolar 5-6", ProblemSpec::make(TrapVariant::bipolar, 5, 6)},
    };
    bool pass = true;
    std::ostringstream s;
    for (const auto &c : cases)
    {
        FrequencyConfig cfg;
        cfg.base.problem = c.spec;
        cfg.base.population_size = 2000;
        cfg.base.selection.tournament_size = niching_tournament;
        cfg.base.seed = master_seed;
        cfg.runs = 30;
        cfg.first_generation = 20;
        cfg.last_generation = 100;
        const auto report = verify_frequencies(cfg);
        double worst = 0.0;
        std::string worst_schema;
        std::size_t outside = 0;
        for (const auto &row : report.rows)
        {
            const double d = std::abs(row.experimental - row.ideal);
            if (d > 0.02)
                ++outside;
            if (d > worst)
            {
                worst = d;
                worst_schema = "block " + std::to_string(row.block) + " " + row.schema + " ideal " + fmt(row.ideal) +
                               " exp " + fmt(row.experimental);
            }
        }
        pass = pass && outside == 0;
        s << c.name << ": " << outside << "/" << report.rows.size() << " schemata off by > 0.02, worst "
          << fmt(worst) << " (" << worst_schema << "); ";
    }
    return {pass, s.str()};
}

// Per-run traces of the 5-4 modified trap, one record per generation.
std::vector<RunTrace> share_traces(Algorithm algo, std::size_t runs)
{
    std::vector<RunTrace> traces(runs);
    parallel_for(runs, 0, [&](std::size_t r) {
        RunConfig cfg = niching_run(algo, 2000, 500);
        cfg.stream = r;
        traces[r] = run(cfg);
    });
    return traces;
}

std::vector<RunTrace> &cached_traces(Algorithm algo)
{
    static std::map<Algorithm, std::vector<RunTrace>> cache;
    auto it = cache.find(algo);
    if (it == cache.end())
        it = cache.emplace(algo, share_traces(algo, 50)).first;
    return it->second;
}

Outcome market_share_stability()
{
    const auto &traces = cached_traces(Algorithm::subniche);
    std::vector<double> mean(32, 0.0);
    std::size_t samples = 0;
    for (const auto &trace : traces)
        for (const auto &record : trace.records)
            if (record.generation >= 100 && record.generation <= 500)
            {
                for (std::size_t o = 0; o < 32; ++o)
                    mean[o] += record.shares[o];
                ++samples;
            }
    for (auto &m : mean)
        m /= static_cast<double>(samples);
    const auto [lo, hi] = std::minmax_element(mean.begin(), mean.end());
    const bool pass = *lo >= 0.02125 && *hi <= 0.04125;
    return {pass, "subniche n=2000, 50 runs, generations 100-500: optimum shares in [" + fmt(*lo, 5) + ", " +
                      fmt(*hi, 5) + "], need within [0.02125, 0.04125]"};
}

// Across-generation standard deviation of each optimum's share, averaged
// over optima and runs, within generations 100-500.
double share_volatility(const std::vector<RunTrace> &traces)
{
    double total = 0.0;
    std::size_t count = 0;
    for (const auto &trace : traces)
    {
        for (std::size_t o = 0; o < 32; ++o)
        {
            double sum = 0.0;
            double sq = 0.0;
            std::size_t g = 0;
            for (const auto &record : trace.records)
                if (record.generation >= 100 && record.generation <= 500)
                {
                    sum += record.shares[o];
                    sq += record.shares[o] * record.shares[o];
                    ++g;
                }
            const double m = sum / static_cast<double>(g);
            total += std::sqrt(std::max(0.0, sq / static_cast<double>(g) - m * m));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

Outcome stability_ranking()
{
    const double sub = share_volatility(cached_traces(Algorithm::subniche));
    const double rts = share_volatility(cached_traces(Algorithm::rts));
    const double ratio = rts / sub;
    return {ratio >= 2.0, "mean share std over generations 100-500: rts " + fmt(rts, 5) + ", subniche " + fmt(sub, 5) +
                              ", ratio " + fmt(ratio, 2) + " (need >= 2)"};
}

Outcome gamma_behaviour()
{
    const std::vector<std::size_t> grid = {125, 250, 500, 1000, 2000, 4000};
    auto sweep = [&](Algorithm algo) {
        ExperimentConfig cfg;
        cfg.base = niching_run(algo, 2000, 500);
        cfg.runs = 50;
        cfg.checkpoints = {100, 500};
        cfg.population_grid = grid;
        return gamma_sweep(cfg);
    };
    const auto sub = sweep(Algorithm::subniche);
    const auto rts = sweep(Algorithm::rts);

    std::ostringstream s;
    bool pass = true;
    bool found = false;
    s << "subniche g(100)/g(500):";
    for (std::size_t i = 0; i + 1 < sub.size(); i += 2)
        s << " " << sub[i].pop << ":" << fmt(sub[i].gamma, 2) << "/" << fmt(sub[i + 1].gamma, 2);
    for (std::size_t i = 0; i + 1 < sub.size(); i += 2)
        if (sub[i].gamma >= 0.9)
        {
            found = true;
            const double gap = std::abs(sub[i].gamma - sub[i + 1].gamma);
            pass = pass && gap <= 0.1;
            s << "; smallest n with g(100)>=0.9 is " << sub[i].pop << ", |diff| " << fmt(gap, 2);
            break;
        }
    if (!found)
    {
        pass = false;
        s << "; no grid size reaches g(100)>=0.9";
    }
    s << "; rts g(100)/g(500):";
    for (std::size_t i = 0; i + 1 < rts.size(); i += 2)
    {
        const bool ok = rts[i + 1].gamma <= rts[i].gamma + 2.0 * rts[i].standard_error;
        pass = pass && ok;
        s << " " << rts[i].pop << ":" << fmt(rts[i].gamma, 2) << "/" << fmt(rts[i + 1].gamma, 2) << (ok ? "" : "!");
    }
    return {pass, s.str()};
}

Outcome population_sizing()
{
    auto search = [&](Algorithm algo, std::size_t m, std::size_t t) {
        ExperimentConfig cfg;
        RunConfig base = niching_run(algo, 2000, t);
        base.problem = ProblemSpec::make(TrapVariant::modified_trap, m, 4);
        cfg.base = base;
        cfg.runs = 50;
        const std::size_t n_opt = std::size_t{1} << m;
        cfg.required = n_opt - 1;
        const double target = static_cast<double>(n_opt - 1) / static_cast<double>(n_opt);
        const auto result = min_population(cfg, target, t);
        return result.saturated ? std::size_t{0} : result.n_min;
    };

    std::ostringstream s;
    std::map<Algorithm, std::vector<std::size_t>> n_min;
    bool monotone = true;
    for (auto algo : {Algorithm::subniche, Algorithm::rts})
    {
        s << algorithm_token(algo) << " n_min(m=2..5, t=100):";
        for (std::size_t m = 2; m <= 5; ++m)
        {
            n_min[algo].push_back(search(algo, m, 100));
            s << " " << n_min[algo].back();
        }
        for (std::size_t i = 0; i < n_min[algo].size(); ++i)
        {
            if (n_min[algo][i] == 0)
                monotone = false;
            if (i > 0 && n_min[algo][i] < n_min[algo][i - 1])
                monotone = false;
        }
        s << "; ";
    }
    const double ratio =
        static_cast<double>(n_min[Algorithm::rts].back()) / static_cast<double>(n_min[Algorithm::subniche].back());
    const bool ratio_ok = ratio >= 4.0;
    s << "(a) monotone " << (monotone ? "yes" : "no") << "; (b) rts/subniche at m=5 = " << fmt(ratio, 2)
      << " (need >= 4); ";

    const std::vector<std::size_t> horizons = {50, 100, 200};
    std::vector<double> rts_t;
    for (auto t : horizons)
        rts_t.push_back(t == 100 ? static_cast<double>(n_min[Algorithm::rts].back())
                                 : static_cast<double>(search(Algorithm::rts, 5, t)));
    const double anchor = mahfoud_model(32, 31.0 / 32.0, 50);
    bool increasing = rts_t[0] > 0.0;
    bool shape = true;
    s << "(c) rts n_min(t=50,100,200) =";
    for (std::size_t i = 0; i < horizons.size(); ++i)
    {
        s << " " << rts_t[i];
        if (i > 0 && !(rts_t[i] > rts_t[i - 1]))
            increasing = false;
        const double predicted = mahfoud_model(32, 31.0 / 32.0, static_cast<double>(horizons[i])) / anchor;
        const double observed = rts_t[i] / rts_t[0];
        if (!(observed >= predicted / 2.0 && observed <= predicted * 2.0))
            shape = false;
        if (i > 0)
            s << " [ratio " << fmt(observed, 3) << " vs model " << fmt(predicted, 3) << "]";
    }
    s << ", increasing " << (increasing ? "yes" : "no");
    return {monotone && ratio_ok && increasing && shape, s.str()};
}

Outcome unit_arithmetic()
{
    auto population = [](const std::vector<std::string> &genomes, std::size_t times) {
        Population pop(genomes.front().size());
        for (std::size_t t = 0; t < times; ++t)
            for (const auto &g : genomes)
                pop.push_back(Individual(Genome::from_string(g)));
        return pop;
    };
    const double c1 = model_complexity(std::vector<GeneGroup>{{0, 1}}, 16);
    const double c2 = model_complexity(std::vector<GeneGroup>{{0}, {1}}, 16);
    const auto uniform = population({"00", "01", "10", "11"}, 4);
    const auto constant = population({"00"}, 16);
    const auto half = population({"0", "1"}, 4);
    const double p1 = compressed_population_complexity(estimate_marginals({{0, 1}}, uniform), uniform);
    const double p2 = compressed_population_complexity(estimate_marginals({{0, 1}}, constant), constant);
    const double p3 = compressed_population_complexity(estimate_marginals({{0}}, half), half);
    const double mahfoud = mahfoud_model(32, 31.0 / 32.0, 100);
    const bool pass =
        c1 == 12.0 && c2 == 8.0 && p1 == 32.0 && p2 == 0.0 && p3 == 8.0 && std::abs(mahfoud - 362.9) <= 0.5;
    std::ostringstream s;
    s << "C_m = " << c1 << ", " << c2 << " bits; C_p = " << p1 << ", " << p2 << ", " << p3
      << " bits; sizing model = " << fmt(mahfoud, 2) << " (need 362.9 +- 0.5)";
    return {pass, s.str()};
}

struct Criterion
{
    std::string id;
    std::string title;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char **argv)
{
    const std::vector<Criterion> criteria = {
        {"A1", "model recovery", model_recovery},
        {"A2", "schema fitness oracle", schema_fitness_oracle},
        {"A3", "ideal vs experimental frequencies", frequency_verification},
        {"A4", "market share near 1/32", market_share_stability},
        {"A5", "stability ranking", stability_ranking},
        {"A6", "gamma over generations", gamma_behaviour},
        {"A7", "population sizing", population_sizing},
        {"A8", "unit arithmetic", unit_arithmetic},
    };

    std::vector<std::string> wanted(argv + 1, argv + argc);
    for (const auto &w : wanted)
        if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion &c) { return c.id == w; }))
        {
            std::fprintf(stderr, "unknown criterion %s\n", w.c_str());
            return 2;
        }

    int failures = 0;
    for (const auto &c : criteria)
    {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try
        {
            outcome = c.check();
        }
        catch (const std::exception &e)
        {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s (%s): %s [%.1fs]\n", c.id.c_str(), outcome.pass ? "PASS" : "FAIL", c.title.c_str(),
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += outcome.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
