// Command-line front end for the eCGA niching experiments.
//
//   subniche run --problem mtrap --m 5 --k 4 --algo subniche --pop 2000 --gens 500 --out trace.csv
//   subniche verify-frequencies --problem trap --m 10 --k 4 --runs 30 --out freq.csv
//   subniche gamma-sweep --algo rts --pop-grid 250,500,1000 --checkpoints 100,500 --out gamma.csv
//   subniche min-pop --algo subniche --m-values 2,3,4,5 --t 100 --out minpop.csv
//   subniche mahfoud --n-opt 32 --gamma 0.96875 --t 100
//
// Exit codes: 0 success, 2 usage error, 3 min-pop search saturated.

#include "ecga/csv.hpp"
#include "ecga/engine.hpp"
#include "ecga/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace
{

constexpr int exit_usage = 2;
constexpr int exit_saturated = 3;

struct CommonOptions
{
    std::string problem = "mtrap";
    std::size_t m = 5;
    std::size_t k = 4;
    std::string algo = "subniche";
    std::size_t pop = 2000;
    std::size_t gens = 100;
    std::uint64_t seed = 1;
    std::size_t runs = 50;
    std::string out;
    std::size_t tournament = 2;
    double truncation = 0.0;
    std::size_t rts_window = 0;
    std::string rts_ties = "replace";
    std::string baseline = "cumulative";
    std::size_t max_group = 0;
    unsigned threads = 0;
};

void add_common(CLI::App *cmd, CommonOptions &o, bool with_runs = true)
{
    cmd->add_option("--problem", o.problem, "trap, mtrap or bipolar")->capture_default_str();
    cmd->add_option("--m", o.m, "number of blocks")->capture_default_str();
    cmd->add_option("--k", o.k, "bits per block")->capture_default_str();
    cmd->add_option("--algo", o.algo, "subniche or rts")->capture_default_str();
    cmd->add_option("--pop", o.pop, "population size")->capture_default_str();
    cmd->add_option("--gens", o.gens, "generations")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    if (with_runs)
        cmd->add_option("--runs", o.runs, "independent runs")->capture_default_str();
    cmd->add_option("--out", o.out, "output CSV path (stdout when omitted)");
    cmd->add_option("--tournament", o.tournament, "tournament size")->capture_default_str();
    cmd->add_option("--truncation", o.truncation, "truncation fraction; replaces tournament selection");
    cmd->add_option("--rts-window", o.rts_window, "RTS window (default: problem length)");
    cmd->add_option("--rts-ties", o.rts_ties, "replace or keep")->capture_default_str();
    cmd->add_option("--schema-baseline", o.baseline, "generation or cumulative")->capture_default_str();
    cmd->add_option("--max-group", o.max_group, "largest linkage group (0: no cap)");
    cmd->add_option("--threads", o.threads, "worker threads (0: hardware)");
}

ecga::RunConfig make_run_config(const CommonOptions &o)
{
    ecga::RunConfig cfg;
    cfg.problem = ecga::ProblemSpec::make(ecga::parse_variant(o.problem), o.m, o.k);
    cfg.algo = ecga::parse_algorithm(o.algo);
    cfg.population_size = o.pop;
    cfg.generations = o.gens;
    cfg.seed = o.seed;
    if (o.truncation > 0.0)
    {
        cfg.selection.kind = ecga::SelectionConfig::Kind::truncation;
        cfg.selection.truncation_fraction = o.truncation;
    }
    else
    {
        cfg.selection.tournament_size = o.tournament;
    }
    cfg.rts.window = o.rts_window;
    if (o.rts_ties == "replace")
        cfg.rts.ties = ecga::TiePolicy::replace_on_tie;
    else if (o.rts_ties == "keep")
        cfg.rts.ties = ecga::TiePolicy::keep_on_tie;
    else
        throw ecga::UsageError("--rts-ties must be replace or keep");
    cfg.baseline = ecga::parse_baseline(o.baseline);
    cfg.model_search.max_group_size = o.max_group;
    return cfg;
}

// Writes to --out when given, stdout otherwise.
class Output
{
  public:
    explicit Output(const std::string &path)
    {
        if (!path.empty())
        {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw ecga::UsageError("cannot open output file " + path);
        }
    }
    std::ostream &stream()
    {
        return file_ ? *file_ : std::cout;
    }

  private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<std::size_t> parse_list(const std::string &text)
{
    std::vector<std::size_t> values;
    for (const auto &field : ecga::split_csv_line(text))
    {
        if (field.empty())
            continue;
        try
        {
            values.push_back(static_cast<std::size_t>(std::stoull(field)));
        }
        catch (const std::exception &)
        {
            throw ecga::UsageError("not an integer list: " + text);
        }
    }
    return values;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"eCGA with sub-structural niching and restricted tournament selection"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::size_t record_every = 1;
    bool dump_models = false;
    auto *run_cmd = app.add_subcommand("run", "run the eCGA and write per-generation market shares");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("--record-every", record_every, "generations between trace snapshots")
        ->capture_default_str();
    run_cmd->add_flag("--dump-models", dump_models, "print the learned partition of every generation to stderr");

    CommonOptions freq_opts;
    freq_opts.problem = "trap";
    freq_opts.m = 10;
    std::size_t first_gen = 20;
    std::size_t last_gen = 100;
    std::string trajectory_path;
    auto *freq_cmd = app.add_subcommand("verify-frequencies", "compare sampled schema frequencies to ideal ones");
    add_common(freq_cmd, freq_opts);
    freq_cmd->add_option("--first", first_gen, "first generation of the averaging window")->capture_default_str();
    freq_cmd->add_option("--last", last_gen, "last generation of the averaging window")->capture_default_str();
    freq_cmd->add_option("--trajectory", trajectory_path, "also write the per-generation block-0 trajectory CSV");

    CommonOptions gamma_opts;
    std::string pop_grid = "125,250,500,1000,2000";
    std::string checkpoints = "100,500";
    std::size_t gamma_required = 0;
    auto *gamma_cmd = app.add_subcommand("gamma-sweep", "success probability over a population grid");
    add_common(gamma_cmd, gamma_opts);
    gamma_cmd->add_option("--pop-grid", pop_grid, "comma-separated population sizes")->capture_default_str();
    gamma_cmd->add_option("--checkpoints", checkpoints, "comma-separated generations")->capture_default_str();
    gamma_cmd->add_option("--required", gamma_required, "distinct optima required (default: all)");

    CommonOptions minpop_opts;
    std::size_t minpop_t = 100;
    std::optional<double> target;
    std::optional<std::size_t> minpop_required;
    std::size_t max_pop = std::size_t{1} << 20;
    std::size_t start_pop = 16;
    std::string m_values;
    auto *minpop_cmd = app.add_subcommand("min-pop", "minimum population size for a success probability");
    add_common(minpop_cmd, minpop_opts);
    minpop_cmd->add_option("--t", minpop_t, "checkpoint generation")->capture_default_str();
    minpop_cmd->add_option("--target", target, "target gamma (default (n_opt-1)/n_opt)");
    minpop_cmd->add_option("--required", minpop_required, "distinct optima required (default n_opt-1)");
    minpop_cmd->add_option("--max-pop", max_pop, "search cap")->capture_default_str();
    minpop_cmd->add_option("--start-pop", start_pop, "first probe")->capture_default_str();
    minpop_cmd->add_option("--m-values", m_values, "comma-separated m values (overrides --m)");

    double mahfoud_nopt = 32;
    double mahfoud_gamma = 31.0 / 32.0;
    double mahfoud_t = 100;
    auto *mahfoud_cmd = app.add_subcommand("mahfoud", "evaluate the niching population-sizing model");
    mahfoud_cmd->add_option("--n-opt", mahfoud_nopt, "number of optima")->capture_default_str();
    mahfoud_cmd->add_option("--gamma", mahfoud_gamma, "success probability")->capture_default_str();
    mahfoud_cmd->add_option("--t", mahfoud_t, "generations")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (*run_cmd)
        {
            auto cfg = make_run_config(run_opts);
            cfg.record_interval = record_every;
            cfg.validate();
            std::vector<ecga::TraceRun> traces(run_opts.runs);
            ecga::parallel_for(run_opts.runs, run_opts.threads, [&](std::size_t r) {
                auto config = cfg;
                config.stream = r;
                ecga::StepObserver observer;
                if (dump_models)
                    observer = [r](const ecga::EcgaRun &state, const ecga::StepReport &report) {
                        std::cerr << "run=" << r << " gen=" << state.generation()
                                  << " groups=" << report.model.signature() << '\n';
                    };
                traces[r] = {r, ecga::run(config, observer)};
            });
            Output out(run_opts.out);
            ecga::write_trace_csv(out.stream(), traces);
        }
        else if (*freq_cmd)
        {
            ecga::FrequencyConfig cfg;
            cfg.base = make_run_config(freq_opts);
            cfg.runs = freq_opts.runs;
            cfg.first_generation = first_gen;
            cfg.last_generation = last_gen;
            cfg.threads = freq_opts.threads;
            const auto report = ecga::verify_frequencies(cfg);
            Output out(freq_opts.out);
            ecga::write_freq_csv(out.stream(), report.rows);
            if (!trajectory_path.empty())
            {
                Output traj(trajectory_path);
                ecga::write_trajectory_csv(traj.stream(), report.trajectory);
            }
        }
        else if (*gamma_cmd)
        {
            ecga::ExperimentConfig cfg;
            cfg.base = make_run_config(gamma_opts);
            cfg.runs = gamma_opts.runs;
            cfg.population_grid = parse_list(pop_grid);
            cfg.checkpoints = parse_list(checkpoints);
            cfg.required = gamma_required;
            cfg.threads = gamma_opts.threads;
            const auto rows = ecga::gamma_sweep(cfg);
            Output out(gamma_opts.out);
            ecga::write_gamma_csv(out.stream(), rows);
        }
        else if (*minpop_cmd)
        {
            std::vector<std::size_t> ms = m_values.empty() ? std::vector<std::size_t>{minpop_opts.m}
                                                           : parse_list(m_values);
            std::vector<ecga::MinPopRow> rows;
            bool saturated = false;
            for (std::size_t m : ms)
            {
                auto opts = minpop_opts;
                opts.m = m;
                ecga::ExperimentConfig cfg;
                cfg.base = make_run_config(opts);
                cfg.runs = opts.runs;
                cfg.checkpoints = {minpop_t};
                const std::size_t n_opt = ecga::enumerate_optima(cfg.base.problem).n_opt();
                cfg.required = minpop_required.value_or(n_opt > 1 ? n_opt - 1 : 1);
                cfg.max_population = max_pop;
                cfg.start_population = start_pop;
                cfg.threads = opts.threads;
                const double goal = target.value_or(static_cast<double>(n_opt - 1) / static_cast<double>(n_opt));
                const auto result = ecga::min_population(cfg, goal, minpop_t);
                if (result.saturated)
                {
                    saturated = true;
                    std::cerr << "min-pop: m=" << m << " saturated at n=" << result.n_min << '\n';
                }
                rows.push_back({cfg.base.algo, n_opt, minpop_t, result.n_min, cfg.runs});
            }
            Output out(minpop_opts.out);
            ecga::write_minpop_csv(out.stream(), rows);
            if (saturated)
                return exit_saturated;
        }
        else if (*mahfoud_cmd)
        {
            std::cout << ecga::format_real(ecga::mahfoud_model(mahfoud_nopt, mahfoud_gamma, mahfoud_t)) << '\n';
        }
    }
    catch (const ecga::UsageError &e)
    {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    return 0;
}
