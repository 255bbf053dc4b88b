#pragma once

#include "ecga/engine.hpp"
#include "ecga/harness.hpp"

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace ecga
{

// Shortest round-trip decimal form, locale independent.
std::string format_real(double value);

struct TraceRun
{
    std::size_t run = 0;
    RunTrace trace;
};

struct MinPopRow
{
    Algorithm algo = Algorithm::subniche;
    std::size_t n_opt = 0;
    std::size_t t = 0;
    std::size_t n_min = 0;
    std::size_t runs = 0;
};

// trace.csv: run,generation,optimum_id,share
void write_trace_csv(std::ostream &out, const std::vector<TraceRun> &runs);
// gamma.csv: algo,pop,checkpoint,gamma,stderr,runs
void write_gamma_csv(std::ostream &out, const std::vector<GammaRow> &rows);
// minpop.csv: algo,n_opt,t,n_min,runs
void write_minpop_csv(std::ostream &out, const std::vector<MinPopRow> &rows);
// freq.csv: block,schema,ideal,experimental,stderr
void write_freq_csv(std::ostream &out, const std::vector<FrequencyRow> &rows);
// trajectory.csv: generation,schema,frequency
void write_trajectory_csv(std::ostream &out, const std::vector<TrajectoryRow> &rows);

// Splits one CSV line on commas (no quoting; the harness never emits any).
std::vector<std::string> split_csv_line(const std::string &line);

} // namespace ecga
