#include "ecga/harness.hpp"

#include "ecga/mpm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ecga
{

std::vector<double> market_share(const Population &pop, const OptimaCatalog &catalog)
{
    std::vector<double> shares(catalog.n_opt(), 0.0);
    if (pop.empty())
        return shares;
    for (const auto &ind : pop)
        if (auto id = catalog.index_of(ind.genome()))
            shares[*id] += 1.0;
    for (auto &s : shares)
        s /= static_cast<double>(pop.size());
    return shares;
}

std::size_t distinct_optima(const Population &pop, const OptimaCatalog &catalog)
{
    std::vector<char> present(catalog.n_opt(), 0);
    std::size_t count = 0;
    for (const auto &ind : pop)
    {
        if (auto id = catalog.index_of(ind.genome()); id && !present[*id])
        {
            present[*id] = 1;
            ++count;
        }
    }
    return count;
}

bool success(const Population &pop, const OptimaCatalog &catalog, std::size_t required)
{
    if (required > catalog.n_opt())
        throw UsageError("success: required count exceeds the number of optima");
    return distinct_optima(pop, catalog) >= required;
}

void ExperimentConfig::validate() const
{
    base.validate();
    if (runs < 1)
        throw UsageError("an experiment needs at least one run");
    if (checkpoints.empty())
        throw UsageError("an experiment needs at least one generation checkpoint");
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw UsageError("generation checkpoints must be ascending");
    if (required > (std::size_t{1} << base.problem.m))
        throw UsageError("required optima exceed the number of optima");
    if (!(resolution > 0.0))
        throw UsageError("resolution must be positive");
}

std::size_t ExperimentConfig::required_optima() const
{
    if (required != 0)
        return required;
    return base.problem.variant == TrapVariant::standard_trap ? 1 : std::size_t{1} << base.problem.m;
}

double gamma_stderr(double gamma, std::size_t runs)
{
    return std::sqrt(gamma * (1.0 - gamma) / static_cast<double>(runs));
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body)
{
    if (threads == 0)
        threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < threads; ++w)
    {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    if (!failed.exchange(true))
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto &w : workers)
        w.join();
    if (failure)
        std::rethrow_exception(failure);
}

namespace
{

// Success flags of one run at each checkpoint.
std::vector<char> run_checkpoints(const ExperimentConfig &cfg, std::size_t n, std::size_t run_index,
                                  std::size_t required)
{
    RunConfig config = cfg.base;
    config.population_size = n;
    config.stream = run_index;
    config.generations = cfg.checkpoints.back();
    if (config.algo == Algorithm::rts && config.rts_window() > n)
        config.rts.window = n;

    EcgaRun state(config);
    std::vector<char> flags(cfg.checkpoints.size(), 0);
    std::size_t next = 0;
    while (next < cfg.checkpoints.size())
    {
        if (state.generation() == cfg.checkpoints[next])
        {
            flags[next] = success(state.population(), state.catalog(), required) ? 1 : 0;
            ++next;
            continue;
        }
        state.step();
    }
    return flags;
}

} // namespace

std::vector<std::size_t> ensemble_successes(const ExperimentConfig &cfg, std::size_t n, std::size_t stop_below)
{
    cfg.validate();
    const std::size_t required = cfg.required_optima();
    std::vector<std::size_t> successes(cfg.checkpoints.size(), 0);

    unsigned threads = cfg.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.threads;
    std::size_t failures_at_last = 0;
    for (std::size_t start = 0; start < cfg.runs; start += threads)
    {
        const std::size_t batch = std::min<std::size_t>(threads, cfg.runs - start);
        std::vector<std::vector<char>> flags(batch);
        parallel_for(batch, threads, [&](std::size_t i) { flags[i] = run_checkpoints(cfg, n, start + i, required); });
        for (const auto &f : flags)
        {
            for (std::size_t c = 0; c < f.size(); ++c)
                successes[c] += static_cast<std::size_t>(f[c]);
            if (!f.back())
                ++failures_at_last;
        }
        if (stop_below > 0 && failures_at_last > cfg.runs - stop_below)
            break;
    }
    return successes;
}

std::vector<GammaRow> gamma_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    std::vector<GammaRow> rows;
    for (std::size_t n : cfg.population_grid)
    {
        const auto successes = ensemble_successes(cfg, n);
        for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c)
        {
            const double gamma = static_cast<double>(successes[c]) / static_cast<double>(cfg.runs);
            rows.push_back({cfg.base.algo, n, cfg.checkpoints[c], gamma, gamma_stderr(gamma, cfg.runs), cfg.runs});
        }
    }
    return rows;
}

MinPopResult min_population(const ExperimentConfig &cfg, double target_gamma, std::size_t t)
{
    if (!(target_gamma > 0.0 && target_gamma < 1.0))
        throw UsageError("target gamma must lie in (0, 1)");
    if (t < 1)
        throw UsageError("checkpoint generation must be at least 1");
    if (cfg.start_population < 2)
        throw UsageError("search must start at a population of at least 2");

    ExperimentConfig probe_cfg = cfg;
    probe_cfg.checkpoints = {t};
    probe_cfg.validate();
    const auto needed =
        static_cast<std::size_t>(std::ceil(target_gamma * static_cast<double>(cfg.runs) - 1e-9));

    MinPopResult result;
    auto probe = [&](std::size_t n, double &gamma) {
        ++result.probes;
        const auto s = ensemble_successes(probe_cfg, n, needed);
        gamma = static_cast<double>(s[0]) / static_cast<double>(cfg.runs);
        return s[0] >= needed;
    };

    double gamma = 0.0;
    std::size_t n = cfg.start_population;
    while (!probe(n, gamma))
    {
        result.last_failure = n;
        if (n >= cfg.max_population)
        {
            result.saturated = true;
            result.n_min = n;
            result.gamma = gamma;
            return result;
        }
        n = std::min(n * 2, cfg.max_population);
    }
    std::size_t hi = n;
    double hi_gamma = gamma;
    std::size_t lo = result.last_failure;
    while (lo > 0 && static_cast<double>(hi - lo) > cfg.resolution * static_cast<double>(hi) && hi - lo > 1)
    {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (probe(mid, gamma))
        {
            hi = mid;
            hi_gamma = gamma;
        }
        else
        {
            lo = mid;
        }
    }
    result.n_min = hi;
    result.last_failure = lo;
    result.gamma = hi_gamma;
    return result;
}

double mahfoud_model(double n_opt, double gamma, double t)
{
    if (!(gamma > 0.0 && gamma < 1.0))
        throw UsageError("mahfoud_model: gamma must lie in (0, 1)");
    if (!(t >= 1.0))
        throw UsageError("mahfoud_model: t must be at least 1");
    if (!(n_opt >= 2.0))
        throw UsageError("mahfoud_model: n_opt must be at least 2");
    const double numerator = std::log((1.0 - std::pow(gamma, 1.0 / t)) / n_opt);
    const double denominator = std::log((n_opt - 1.0) / n_opt);
    return numerator / denominator;
}

std::vector<double> ideal_frequencies(const ProblemSpec &spec, std::size_t block)
{
    SchemaTable table;
    table.genome_length = spec.length();
    GeneGroup genes(spec.k);
    for (std::size_t t = 0; t < spec.k; ++t)
        genes[t] = block * spec.k + t;
    const auto fitness = true_schema_fitness(spec, block);
    table.groups.push_back({genes, fitness, std::vector<std::size_t>(fitness.size(), 1), {}});
    return proportionate_frequencies(std::move(table)).groups.front().frequency;
}

namespace
{
std::string configuration_string(std::size_t code, std::size_t k)
{
    std::string s(k, '0');
    for (std::size_t t = 0; t < k; ++t)
        if ((code >> (k - 1 - t)) & 1U)
            s[t] = '1';
    return s;
}
} // namespace

FrequencyReport verify_frequencies(const FrequencyConfig &cfg)
{
    RunConfig base = cfg.base;
    base.algo = Algorithm::subniche;
    base.generations = cfg.last_generation;
    base.validate();
    if (cfg.runs < 1)
        throw UsageError("verify_frequencies needs at least one run");
    if (cfg.first_generation > cfg.last_generation)
        throw UsageError("generation window is empty");
    if (cfg.trajectory_block >= base.problem.m)
        throw UsageError("trajectory block out of range");

    const ProblemSpec &spec = base.problem;
    const std::size_t configs = std::size_t{1} << spec.k;
    const std::size_t window = cfg.last_generation - cfg.first_generation + 1;

    // per_run[r][b * configs + c]: time-averaged frequency of configuration c in block b.
    std::vector<std::vector<double>> per_run(cfg.runs, std::vector<double>(spec.m * configs, 0.0));
    // trajectories[r][g * configs + c] for the trajectory block.
    std::vector<std::vector<double>> trajectories(cfg.runs,
                                                  std::vector<double>((cfg.last_generation + 1) * configs, 0.0));

    parallel_for(cfg.runs, cfg.threads, [&](std::size_t r) {
        RunConfig config = base;
        config.stream = r;
        EcgaRun state(config);
        std::vector<GeneGroup> blocks(spec.m, GeneGroup(spec.k));
        for (std::size_t b = 0; b < spec.m; ++b)
            for (std::size_t t = 0; t < spec.k; ++t)
                blocks[b][t] = b * spec.k + t;

        auto observe = [&] {
            const std::size_t g = state.generation();
            const auto &pop = state.population();
            const double inv_n = 1.0 / static_cast<double>(pop.size());
            for (std::size_t b = 0; b < spec.m; ++b)
            {
                std::vector<double> freq(configs, 0.0);
                for (const auto &ind : pop)
                    freq[configuration_of(ind.genome(), blocks[b])] += inv_n;
                if (g >= cfg.first_generation)
                    for (std::size_t c = 0; c < configs; ++c)
                        per_run[r][b * configs + c] += freq[c] / static_cast<double>(window);
                if (b == cfg.trajectory_block)
                    std::copy(freq.begin(), freq.end(), trajectories[r].begin() + static_cast<long>(g * configs));
            }
        };
        observe();
        while (state.generation() < cfg.last_generation)
        {
            state.step();
            observe();
        }
    });

    FrequencyReport report;
    for (std::size_t b = 0; b < spec.m; ++b)
    {
        const auto ideal = ideal_frequencies(spec, b);
        for (std::size_t c = 0; c < configs; ++c)
        {
            double mean = 0.0;
            for (std::size_t r = 0; r < cfg.runs; ++r)
                mean += per_run[r][b * configs + c];
            mean /= static_cast<double>(cfg.runs);
            double var = 0.0;
            for (std::size_t r = 0; r < cfg.runs; ++r)
                var += (per_run[r][b * configs + c] - mean) * (per_run[r][b * configs + c] - mean);
            const double se = cfg.runs > 1 ? std::sqrt(var / static_cast<double>(cfg.runs - 1)) /
                                                 std::sqrt(static_cast<double>(cfg.runs))
                                           : 0.0;
            report.rows.push_back({b, configuration_string(c, spec.k), ideal[c], mean, se});
        }
    }
    for (std::size_t g = 0; g <= cfg.last_generation; ++g)
    {
        for (std::size_t c = 0; c < configs; ++c)
        {
            double mean = 0.0;
            for (std::size_t r = 0; r < cfg.runs; ++r)
                mean += trajectories[r][g * configs + c];
            report.trajectory.push_back({g, configuration_string(c, spec.k), mean / static_cast<double>(cfg.runs)});
        }
    }
    return report;
}

} // namespace ecga
