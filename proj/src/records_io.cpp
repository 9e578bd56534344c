#include "smisga/bench.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace smisga {

CsvError::CsvError(const std::string& what, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool next_line(std::istream& is, std::string& line, std::size_t& lineno) {
    if (!std::getline(is, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

template <class Int>
Int parse_int(const std::string& s, std::string_view column, std::size_t line) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw CsvError("column '" + std::string(column) + "': not an integer: '" + s + "'", line);
    return v;
}

double parse_real(const std::string& s, std::string_view column, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw CsvError("column '" + std::string(column) + "': not a number: '" + s + "'", line);
    return v;
}

std::string noise_to_string(int h) { return h == kNoiseFree ? "inf" : std::to_string(h); }

}  // namespace

void write_records(std::ostream& os, const std::vector<RunRecord>& records) {
    for (std::size_t i = 0; i < std::size(kRecordColumns); ++i) os << (i ? "," : "") << kRecordColumns[i];
    os << '\n';
    for (const auto& r : records) {
        os << r.problem_id << ',' << to_string(r.ensemble) << ',' << r.n << ',' << r.m << ',' << r.k << ','
           << format_double(r.delta) << ',' << format_double(r.rho) << ',' << noise_to_string(r.noise_h) << ','
           << r.seed << ',' << r.solver << ',' << to_string(r.status) << ',' << format_double(r.cpu_sec) << ','
           << r.n_iter << ',' << r.n_fun << ',' << format_double(r.rel_err) << ',' << format_double(r.final_F)
           << '\n';
    }
}

std::vector<RunRecord> read_records(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(is, line, lineno)) throw CsvError("empty file: missing header", 1);

    const auto header = split(line);
    std::map<std::string, std::size_t, std::less<>> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (std::string_view name : kRecordColumns)
        if (!col.contains(name)) throw CsvError("missing column '" + std::string(name) + "'", lineno);

    std::vector<RunRecord> out;
    while (next_line(is, line, lineno)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != header.size())
            throw CsvError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()),
                           lineno);
        auto field = [&](std::string_view name) -> const std::string& { return f[col.find(name)->second]; };

        RunRecord r;
        r.problem_id = parse_int<std::size_t>(field("problem_id"), "problem_id", lineno);
        try {
            r.ensemble = parse_ensemble(field("ensemble"));
            r.status = parse_status(field("status"));
        } catch (const std::invalid_argument& e) {
            throw CsvError(e.what(), lineno);
        }
        r.n = parse_int<Index>(field("n"), "n", lineno);
        r.m = parse_int<Index>(field("m"), "m", lineno);
        r.k = parse_int<Index>(field("k"), "k", lineno);
        r.delta = parse_real(field("delta"), "delta", lineno);
        r.rho = parse_real(field("rho"), "rho", lineno);
        r.noise_h = field("noise_h") == "inf" ? kNoiseFree : parse_int<int>(field("noise_h"), "noise_h", lineno);
        r.seed = parse_int<std::uint64_t>(field("seed"), "seed", lineno);
        r.solver = field("solver");
        if (r.solver.empty()) throw CsvError("column 'solver' is empty", lineno);
        r.cpu_sec = parse_real(field("cpu_sec"), "cpu_sec", lineno);
        r.n_iter = parse_int<int>(field("n_iter"), "n_iter", lineno);
        r.n_fun = parse_int<long>(field("n_fun"), "n_fun", lineno);
        r.rel_err = parse_real(field("rel_err"), "rel_err", lineno);
        r.final_F = parse_real(field("final_F"), "final_F", lineno);
        out.push_back(std::move(r));
    }
    return out;
}

void write_records(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_records(os, records);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<RunRecord> read_records(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_records(is);
}

void write_profile_csv(std::ostream& os, Metric metric, const std::vector<ProfileCurve>& curves, bool header) {
    if (header) os << "metric,solver,varsigma,probability\n";
    for (const auto& c : curves)
        for (const auto& p : c.points)
            os << to_string(metric) << ',' << c.solver << ',' << format_double(p.varsigma) << ','
               << format_double(p.probability) << '\n';
}

void write_summary_text(std::ostream& os, const std::vector<SolverSummary>& summary) {
    const auto flags = os.flags();
    os << "Cost metrics: mean | standard deviation\n";
    os << std::left << std::setw(10) << "solver" << std::right << std::setw(11) << "CPU(Sec)" << std::setw(11)
       << "nIter" << std::setw(11) << "nFun" << " |" << std::setw(11) << "CPU(Sec)" << std::setw(11) << "nIter"
       << std::setw(11) << "nFun" << '\n';
    os << std::fixed;
    for (const auto& s : summary) {
        os << std::left << std::setw(10) << s.solver << std::right << std::setprecision(3) << std::setw(11)
           << s.cpu_sec.mean << std::setprecision(1) << std::setw(11) << s.n_iter.mean << std::setw(11) << s.n_fun.mean
           << " |" << std::setprecision(3) << std::setw(11) << s.cpu_sec.sd << std::setprecision(1) << std::setw(11)
           << s.n_iter.sd << std::setw(11) << s.n_fun.sd << '\n';
    }
    os << "\nRelative error: mean, sd | max, min\n";
    os << std::left << std::setw(10) << "solver" << std::right << std::setw(11) << "RelErr" << std::setw(11)
       << "SdRelErr" << " |" << std::setw(11) << "MaxRelErr" << std::setw(11) << "MinRelErr" << '\n';
    os << std::setprecision(4);
    for (const auto& s : summary) {
        os << std::left << std::setw(10) << s.solver << std::right << std::setw(11) << s.rel_err.mean << std::setw(11)
           << s.rel_err.sd << " |" << std::setw(11) << s.rel_err.max << std::setw(11) << s.rel_err.min << '\n';
    }
    os.flags(flags);
}

void write_summary_csv(std::ostream& os, const std::vector<SolverSummary>& summary) {
    os << "solver,count,cpu_sec_mean,n_iter_mean,n_fun_mean,cpu_sec_sd,n_iter_sd,n_fun_sd,"
          "rel_err_mean,rel_err_sd,rel_err_max,rel_err_min\n";
    for (const auto& s : summary) {
        os << s.solver << ',' << s.count;
        for (double v : {s.cpu_sec.mean, s.n_iter.mean, s.n_fun.mean, s.cpu_sec.sd, s.n_iter.sd, s.n_fun.sd,
                         s.rel_err.mean, s.rel_err.sd, s.rel_err.max, s.rel_err.min})
            os << ',' << format_double(v);
        os << '\n';
    }
}

}  // namespace smisga
