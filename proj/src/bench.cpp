#include "smisga/bench.hpp"

#include "smisga/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

namespace smisga {

Index ProblemSpec::m() const { return static_cast<Index>(std::lround(delta * static_cast<double>(n))); }

Index ProblemSpec::k() const { return static_cast<Index>(std::lround(rho * static_cast<double>(m()))); }

double ProblemSpec::sigma() const { return noise_h == kNoiseFree ? 0.0 : std::pow(10.0, -noise_h); }

void ProblemSpec::validate() const {
    if (n < 1) throw std::invalid_argument("problem spec: n must be positive");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("problem spec: delta must lie in (0, 1]");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("problem spec: rho must lie in (0, 1]");
    if (m() < 1) throw std::invalid_argument("problem spec: m = round(delta n) must be at least 1");
    if (k() < 1) throw std::invalid_argument("problem spec: k = round(rho m) must be at least 1");
    if (ensemble == EnsembleKind::dense) throw std::invalid_argument("problem spec: dense is not a random ensemble");
    if ((ensemble == EnsembleKind::partial_hadamard || ensemble == EnsembleKind::partial_dct) && !is_power_of_two(n))
        throw std::invalid_argument("problem spec: implicit transforms need n to be a power of two");
}

GeneratedProblem generate_problem(const ProblemSpec& spec, double mu) {
    spec.validate();
    const Index n = spec.n;
    const Index m = spec.m();
    const Index k = spec.k();

    const EnsembleSpec es{spec.ensemble, m, n, mix_seed(spec.seed, {1})};
    auto op = std::make_shared<const LinearOperator>(make_operator(es));

    Rng rng(mix_seed(spec.seed, {2}));
    auto support = rng.sample_indices(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
    Vector xs = Vector::Zero(n);
    for (std::size_t i : support) xs[static_cast<Index>(i)] = rng.normal();

    const double sigma = spec.sigma();
    Vector xs_true = xs;
    if (sigma > 0.0)
        for (Index i = 0; i < n; ++i) xs_true[i] += sigma * rng.normal();

    Vector b = op->apply(xs_true);
    if (sigma > 0.0)
        for (Index i = 0; i < m; ++i) b[i] += sigma * rng.normal();

    return GeneratedProblem{spec, CompositeObjective(std::move(op), std::move(b), mu), std::move(xs_true),
                            std::move(xs), std::move(support)};
}

GridAxes GridAxes::full() {
    GridAxes g;
    g.ensembles.assign(std::begin(kRandomEnsembles), std::end(kRandomEnsembles));
    for (int p = 10; p <= 15; ++p) g.n.push_back(Index{1} << p);
    g.delta = {0.1, 0.2, 0.3};
    g.rho = {0.1, 0.2, 0.3};
    g.noise_h = {1, 3, 5, 7};
    return g;
}

GridAxes GridAxes::reduced(Index max_n) {
    GridAxes g = full();
    std::erase_if(g.n, [&](Index n) { return n > max_n; });
    return g;
}

std::size_t GridAxes::size() const { return ensembles.size() * n.size() * delta.size() * rho.size() * noise_h.size(); }

std::uint64_t cell_seed(std::uint64_t base_seed, EnsembleKind kind, Index n, double delta, double rho, int noise_h) {
    // Fractions enter as integer thousandths so the seed does not depend on
    // the binary representation of 0.1 etc.
    return mix_seed(base_seed, {static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(std::llround(delta * 1000.0)),
                                static_cast<std::uint64_t>(std::llround(rho * 1000.0)),
                                static_cast<std::uint64_t>(static_cast<std::int64_t>(noise_h))});
}

std::vector<ProblemSpec> make_grid(const GridAxes& axes, std::uint64_t base_seed) {
    std::vector<ProblemSpec> out;
    out.reserve(axes.size());
    for (EnsembleKind e : axes.ensembles)
        for (Index n : axes.n)
            for (double d : axes.delta)
                for (double r : axes.rho)
                    for (int h : axes.noise_h) {
                        ProblemSpec s;
                        s.problem_id = out.size();
                        s.ensemble = e;
                        s.n = n;
                        s.delta = d;
                        s.rho = r;
                        s.noise_h = h;
                        s.seed = cell_seed(base_seed, e, n, d, r, h);
                        out.push_back(s);
                    }
    return out;
}

std::vector<ProblemSpec> full_grid(std::uint64_t base_seed) { return make_grid(GridAxes::full(), base_seed); }

std::vector<ProblemSpec> reduced_grid(std::uint64_t base_seed, Index max_n) {
    return make_grid(GridAxes::reduced(max_n), base_seed);
}

double relative_error(const Vector& x, const Vector& xs_true) {
    if (x.size() != xs_true.size()) throw std::invalid_argument("relative_error: length mismatch");
    const double ref = xs_true.norm();
    if (!(ref > 0.0)) throw std::invalid_argument("relative_error: zero reference signal");
    return (x - xs_true).norm() / ref;
}

bool same_outcome(const RunRecord& a, const RunRecord& b) {
    RunRecord aa = a;
    aa.cpu_sec = b.cpu_sec;
    return aa == b;
}

int default_jobs() {
    if (const char* env = std::getenv("SMISGA_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

RunRecord make_record(const GeneratedProblem& p, const std::string& solver) {
    RunRecord r;
    r.problem_id = p.spec.problem_id;
    r.ensemble = p.spec.ensemble;
    r.n = p.spec.n;
    r.m = p.spec.m();
    r.k = p.spec.k();
    r.delta = p.spec.delta;
    r.rho = p.spec.rho;
    r.noise_h = p.spec.noise_h;
    r.seed = p.spec.seed;
    r.solver = solver;
    return r;
}

}  // namespace

std::vector<RunRecord> run_benchmark(const std::vector<ProblemSpec>& specs, const std::vector<std::string>& solvers,
                                     const SolverConfig& cfg, const BenchOptions& opts) {
    cfg.validate();
    for (const auto& s : solvers)
        if (!is_registered_solver(s)) throw std::invalid_argument("unknown solver: " + s);
    for (const auto& s : specs) s.validate();

    std::vector<std::vector<RunRecord>> slots(specs.size());
    std::atomic<std::size_t> next{0};
    std::mutex hook_mutex;
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            try {
                const GeneratedProblem problem = generate_problem(specs[i], cfg.mu);
                const Vector x0 = Vector::Zero(problem.objective.dim());
                for (const auto& name : solvers) {
                    RunRecord rec = make_record(problem, name);
                    std::optional<SolveResult> res;
                    try {
                        res = run_solver(name, problem.objective, x0, cfg);
                    } catch (const std::exception&) {
                        // Report the failed solve as the zero estimate.
                        rec.status = SolveStatus::line_search_failure;
                        rec.rel_err = 1.0;
                        rec.final_F = 0.5 * problem.objective.b().squaredNorm();
                    }
                    if (res) {
                        rec.status = res->status;
                        rec.cpu_sec = res->cpu_seconds;
                        rec.n_iter = res->n_iter;
                        rec.n_fun = res->n_fun;
                        rec.rel_err = relative_error(res->x_final, problem.xs_true);
                        rec.final_F = res->final_F;
                        if (opts.on_result) {
                            std::lock_guard lock(hook_mutex);
                            opts.on_result(problem, name, *res);
                        }
                    }
                    slots[i].push_back(std::move(rec));
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(specs.size());
                return;
            }
        }
    };

    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(std::max<std::size_t>(specs.size(), 1))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    std::vector<RunRecord> out;
    out.reserve(specs.size() * solvers.size());
    for (auto& slot : slots)
        for (auto& r : slot) out.push_back(std::move(r));
    return out;
}

Stats describe(const std::vector<double>& values) {
    Stats s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size()));
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

namespace {

std::vector<std::string> solver_order(const std::vector<RunRecord>& records) {
    std::vector<std::string> seen;
    for (const auto& r : records)
        if (std::find(seen.begin(), seen.end(), r.solver) == seen.end()) seen.push_back(r.solver);
    std::vector<std::string> order;
    for (std::string_view name : solver_names())
        if (std::find(seen.begin(), seen.end(), name) != seen.end()) order.emplace_back(name);
    for (const auto& s : seen)
        if (!is_registered_solver(s)) order.push_back(s);
    return order;
}

}  // namespace

std::vector<SolverSummary> summarize(const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: empty record set");
    std::vector<SolverSummary> out;
    for (const auto& name : solver_order(records)) {
        std::vector<double> cpu, iters, funs, errs;
        for (const auto& r : records) {
            if (r.solver != name) continue;
            cpu.push_back(r.cpu_sec);
            iters.push_back(static_cast<double>(r.n_iter));
            funs.push_back(static_cast<double>(r.n_fun));
            errs.push_back(r.rel_err);
        }
        out.push_back({name, cpu.size(), describe(cpu), describe(iters), describe(funs), describe(errs)});
    }
    return out;
}

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::cpu_sec: return "cpu_sec";
        case Metric::n_iter: return "n_iter";
        case Metric::n_fun: return "n_fun";
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    for (Metric m : {Metric::cpu_sec, Metric::n_iter, Metric::n_fun})
        if (to_string(m) == name) return m;
    throw std::invalid_argument("unknown metric: " + std::string(name));
}

std::vector<ProfileCurve> performance_profile(const std::vector<RunRecord>& records, Metric metric) {
    if (records.empty()) throw std::invalid_argument("performance_profile: empty record set");
    std::vector<std::string> solvers;
    for (const auto& r : records)
        if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) solvers.push_back(r.solver);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // problem -> per-solver cost (inf for failed runs)
    std::map<std::size_t, std::vector<double>> cost;
    std::map<std::size_t, std::vector<bool>> present;
    for (const auto& r : records) {
        const auto s = static_cast<std::size_t>(std::find(solvers.begin(), solvers.end(), r.solver) - solvers.begin());
        auto& row = cost.try_emplace(r.problem_id, solvers.size(), kInf).first->second;
        auto& seen = present.try_emplace(r.problem_id, solvers.size(), false).first->second;
        if (seen[s])
            throw std::invalid_argument("performance_profile: duplicate record for problem " +
                                        std::to_string(r.problem_id) + ", solver " + r.solver);
        seen[s] = true;
        double v = 0.0;
        switch (metric) {
            case Metric::cpu_sec: v = r.cpu_sec; break;
            case Metric::n_iter: v = static_cast<double>(r.n_iter); break;
            case Metric::n_fun: v = static_cast<double>(r.n_fun); break;
        }
        row[s] = is_success(r.status) ? v : kInf;
    }
    for (const auto& [pid, seen] : present)
        for (std::size_t s = 0; s < solvers.size(); ++s)
            if (!seen[s])
                throw std::invalid_argument("performance_profile: missing record for problem " + std::to_string(pid) +
                                            ", solver " + solvers[s]);

    std::vector<std::vector<double>> ratios(solvers.size());
    std::set<double> grid;
    for (const auto& [pid, row] : cost) {
        const double best = *std::min_element(row.begin(), row.end());
        for (std::size_t s = 0; s < solvers.size(); ++s) {
            double r = kInf;
            if (std::isfinite(row[s])) {
                if (best > 0.0)
                    r = row[s] / best;
                else
                    r = row[s] == 0.0 ? 1.0 : kInf;
            }
            ratios[s].push_back(r);
            if (std::isfinite(r)) grid.insert(r);
        }
    }

    const double n_p = static_cast<double>(cost.size());
    std::vector<ProfileCurve> curves;
    for (std::size_t s = 0; s < solvers.size(); ++s) {
        auto sorted = ratios[s];
        std::sort(sorted.begin(), sorted.end());
        ProfileCurve c{solvers[s], {}};
        for (double v : grid) {
            const auto count = std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
            c.points.push_back({v, static_cast<double>(count) / n_p});
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

}  // namespace smisga
