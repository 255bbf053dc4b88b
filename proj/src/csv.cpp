#include "ecga/csv.hpp"

#include <array>
#include <charconv>

namespace ecga
{

std::string format_real(double value)
{
    std::array<char, 64> buffer{};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc())
        return "nan";
    return std::string(buffer.data(), end);
}

void write_trace_csv(std::ostream &out, const std::vector<TraceRun> &runs)
{
    out << "run,generation,optimum_id,share\n";
    for (const auto &r : runs)
        for (const auto &record : r.trace.records)
            for (std::size_t id = 0; id < record.shares.size(); ++id)
                out << r.run << ',' << record.generation << ',' << id << ',' << format_real(record.shares[id])
                    << '\n';
}

void write_gamma_csv(std::ostream &out, const std::vector<GammaRow> &rows)
{
    out << "algo,pop,checkpoint,gamma,stderr,runs\n";
    for (const auto &row : rows)
        out << algorithm_token(row.algo) << ',' << row.pop << ',' << row.checkpoint << ','
            << format_real(row.gamma) << ',' << format_real(row.standard_error) << ',' << row.runs << '\n';
}

void write_minpop_csv(std::ostream &out, const std::vector<MinPopRow> &rows)
{
    out << "algo,n_opt,t,n_min,runs\n";
    for (const auto &row : rows)
        out << algorithm_token(row.algo) << ',' << row.n_opt << ',' << row.t << ',' << row.n_min << ','
            << row.runs << '\n';
}

void write_freq_csv(std::ostream &out, const std::vector<FrequencyRow> &rows)
{
    out << "block,schema,ideal,experimental,stderr\n";
    for (const auto &row : rows)
        out << row.block << ',' << row.schema << ',' << format_real(row.ideal) << ','
            << format_real(row.experimental) << ',' << format_real(row.standard_error) << '\n';
}

void write_trajectory_csv(std::ostream &out, const std::vector<TrajectoryRow> &rows)
{
    out << "generation,schema,frequency\n";
    for (const auto &row : rows)
        out << row.generation << ',' << row.schema << ',' << format_real(row.frequency) << '\n';
}

std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> fields;
    std::string current;
    for (char c : line)
    {
        if (c == ',')
        {
            fields.push_back(std::move(current));
            current.clear();
        }
        else if (c != '\r')
        {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

} // namespace ecga
