#pragma once

#include "smisga/objective.hpp"
#include "smisga/operators.hpp"
#include "smisga/solvers.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smisga {

/// noise_h value meaning sigma = 0. Test use only.
inline constexpr int kNoiseFree = std::numeric_limits<int>::max();

/// Default base seed for grids.
inline constexpr std::uint64_t kDefaultBaseSeed = 20240917;

/// One cell of the randomized problem grid.
struct ProblemSpec {
    std::size_t problem_id = 0;
    EnsembleKind ensemble = EnsembleKind::gaussian;
    Index n = 1024;
    double delta = 0.1;
    double rho = 0.1;
    int noise_h = 1;
    std::uint64_t seed = 0;

    /// round(delta * n), halves away from zero.
    Index m() const;
    /// round(rho * m), halves away from zero.
    Index k() const;
    /// 10^-noise_h, or 0 for kNoiseFree.
    double sigma() const;
    /// Throws std::invalid_argument unless 1 <= k <= m <= n and n is valid for the ensemble.
    void validate() const;
};

struct GeneratedProblem {
    ProblemSpec spec;
    CompositeObjective objective;
    Vector xs_true;   // sparse signal plus noise: the recovery reference
    Vector xs_clean;  // sparse signal before noise
    std::vector<std::size_t> support;
};

/// A = make_operator(spec), k-sparse standard normal signal on a uniform
/// support, xs_true = xs + sigma * noise, b = A xs_true + sigma * noise.
/// Deterministic in spec.seed.
GeneratedProblem generate_problem(const ProblemSpec& spec, double mu);

/// Axis values of a grid.
struct GridAxes {
    std::vector<EnsembleKind> ensembles;
    std::vector<Index> n;
    std::vector<double> delta;
    std::vector<double> rho;
    std::vector<int> noise_h;

    static GridAxes full();
    /// full() restricted to n <= max_n.
    static GridAxes reduced(Index max_n = 2048);
    std::size_t size() const;
};

/// Cartesian product in axis order (ensemble, n, delta, rho, noise). Each
/// cell's seed is derived from base_seed and the cell's coordinates alone,
/// so a cell has the same seed in every grid that contains it.
std::vector<ProblemSpec> make_grid(const GridAxes& axes, std::uint64_t base_seed);
/// 6 ensembles x 6 sizes x 3 delta x 3 rho x 4 noise levels = 1296 cells.
std::vector<ProblemSpec> full_grid(std::uint64_t base_seed);
/// Cells of the full grid with n <= max_n.
std::vector<ProblemSpec> reduced_grid(std::uint64_t base_seed, Index max_n = 2048);
/// Seed for one grid cell.
std::uint64_t cell_seed(std::uint64_t base_seed, EnsembleKind kind, Index n, double delta, double rho, int noise_h);

/// ||x - xs_true|| / ||xs_true||. Throws std::invalid_argument for a zero reference.
double relative_error(const Vector& x, const Vector& xs_true);

struct RunRecord {
    std::size_t problem_id = 0;
    EnsembleKind ensemble = EnsembleKind::gaussian;
    Index n = 0;
    Index m = 0;
    Index k = 0;
    double delta = 0.0;
    double rho = 0.0;
    int noise_h = 0;
    std::uint64_t seed = 0;
    std::string solver;
    SolveStatus status = SolveStatus::converged;
    double cpu_sec = 0.0;
    int n_iter = 0;
    long n_fun = 0;
    double rel_err = 0.0;
    double final_F = 0.0;

    bool operator==(const RunRecord&) const = default;
};

/// Equal in every field except cpu_sec.
bool same_outcome(const RunRecord& a, const RunRecord& b);

struct BenchOptions {
    /// Worker threads; values < 1 mean one.
    int jobs = 1;
    /// Called once per solve, serialized under a lock. The solve's trace is
    /// filled when the config asks for it.
    std::function<void(const GeneratedProblem&, std::string_view solver, const SolveResult&)> on_result;
};

/// One record per (spec, solver), ordered by spec then by solver. Problems
/// run in parallel; results depend only on seeds. A solver that throws is
/// recorded as LineSearchFailure rather than aborting the batch.
std::vector<RunRecord> run_benchmark(const std::vector<ProblemSpec>& specs, const std::vector<std::string>& solvers,
                                     const SolverConfig& cfg, const BenchOptions& opts = {});

/// Worker count from the SMISGA_JOBS environment variable, else hardware concurrency.
int default_jobs();

struct Stats {
    double mean = 0.0;
    double sd = 0.0;  // population
    double min = 0.0;
    double max = 0.0;
};
Stats describe(const std::vector<double>& values);

struct SolverSummary {
    std::string solver;
    std::size_t count = 0;
    Stats cpu_sec;
    Stats n_iter;
    Stats n_fun;
    Stats rel_err;
};

/// Per-solver statistics, ordered by solver registration order (unregistered
/// names follow in order of first appearance). Throws std::invalid_argument on empty input.
std::vector<SolverSummary> summarize(const std::vector<RunRecord>& records);

enum class Metric { cpu_sec, n_iter, n_fun };
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

struct ProfilePoint {
    double varsigma;
    double probability;
};

struct ProfileCurve {
    std::string solver;
    std::vector<ProfilePoint> points;
};

/// Performance profiles over the records. Ratio r_ps = t_ps / min_s t_ps over
/// successful runs; failed runs get +inf. Every curve is sampled at the union
/// of distinct finite ratios. Throws std::invalid_argument when some problem
/// lacks a record for some solver.
std::vector<ProfileCurve> performance_profile(const std::vector<RunRecord>& records, Metric metric);

/// Parse or schema problem in a records/profile file.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& what, std::size_t line);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline constexpr std::string_view kRecordColumns[] = {
    "problem_id", "ensemble", "n",      "m",      "k",      "delta",   "rho",     "noise_h",
    "seed",       "solver",   "status", "cpu_sec", "n_iter", "n_fun", "rel_err", "final_F",
};

void write_records(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records(std::istream& is);
/// File variants throw std::runtime_error when the file cannot be opened.
void write_records(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records(const std::string& path);

/// Columns: metric, solver, varsigma, probability.
void write_profile_csv(std::ostream& os, Metric metric, const std::vector<ProfileCurve>& curves, bool header = true);

/// Aligned text tables: cost metrics (mean | sd) and relative error (mean, sd | max, min).
void write_summary_text(std::ostream& os, const std::vector<SolverSummary>& summary);
void write_summary_csv(std::ostream& os, const std::vector<SolverSummary>& summary);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace smisga
