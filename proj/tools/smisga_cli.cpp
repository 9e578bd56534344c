#include "smisga/bench.hpp"
#include "smisga/config_io.hpp"
#include "smisga/plot.hpp"
#include "smisga/rng.hpp"
#include "smisga/selftest.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace smisga;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kSelftest = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string registered_list() {
    std::string s;
    for (auto n : solver_names()) s += (s.empty() ? "" : ", ") + std::string(n);
    return s;
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

void check_solvers(const std::vector<std::string>& names) {
    if (names.empty()) throw UsageError("no solvers given; registered solvers: " + registered_list());
    for (const auto& n : names)
        if (!is_registered_solver(n))
            throw UsageError("unknown solver '" + n + "'; registered solvers: " + registered_list());
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

void finish_out(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw IoError("write to '" + path + "' failed");
}

RunConfig load_config_opt(const std::string& path) {
    if (path.empty()) return {};
    try {
        return load_run_config(path);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
}

void print_resolved(const SolverConfig& cfg, std::uint64_t seed) {
    std::cout << "# config " << to_json(cfg).dump() << '\n' << "# seed " << seed << '\n';
}

struct ProblemFlags {
    std::string ensemble = "gaussian";
    Index n = 1024;
    double delta = 0.3;
    double rho = 0.1;
    int noise_h = 7;
    std::uint64_t seed = kDefaultBaseSeed;

    void add(CLI::App* app) {
        app->add_option("--ensemble", ensemble, "Measurement ensemble")
            ->check(CLI::IsMember({"gaussian", "scaled_gaussian", "orthogonalized_gaussian", "bernoulli",
                                   "partial_hadamard", "partial_dct"}))
            ->capture_default_str();
        app->add_option("--n", n, "Signal length (power of two)")->capture_default_str();
        app->add_option("--delta", delta, "Measurement ratio m/n")->capture_default_str();
        app->add_option("--rho", rho, "Sparsity ratio k/m")->capture_default_str();
        app->add_option("--noise", noise_h, "Noise level h, sigma = 10^-h")->capture_default_str();
        app->add_option("--seed", seed, "Problem seed")->capture_default_str();
    }

    ProblemSpec spec() const {
        ProblemSpec s;
        s.ensemble = parse_ensemble(ensemble);
        s.n = n;
        s.delta = delta;
        s.rho = rho;
        s.noise_h = noise_h;
        s.seed = seed;
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return s;
    }
};

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace) {
    os << "k,F,F_next,d_norm,alpha,tau,nu,lambda,eta,R,window_max,delta,grad_norm,backtracks,degraded\n";
    for (const auto& r : trace) {
        os << r.k;
        for (double v : {r.F, r.F_next, r.d_norm, r.alpha, r.tau, r.nu, r.lambda, r.eta, r.R, r.window_max, r.delta,
                         r.grad_norm})
            os << ',' << format_double(v);
        os << ',' << r.backtracks << ',' << (r.degraded ? 1 : 0) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Goldstein-type shrinkage solvers for l1-regularized least squares"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Generate one problem and solve it");
    ProblemFlags solve_problem;
    solve_problem.add(solve);
    std::string solve_solvers = "smisga", solve_config, trace_out, trace_plot;
    solve->add_option("--solvers", solve_solvers, "Comma-separated solver names")->capture_default_str();
    solve->add_option("--config", solve_config, "JSON configuration file");
    solve->add_option("--trace-out", trace_out, "Per-iteration CSV (first solver)");
    solve->add_option("--trace-plot", trace_plot, "SVG of F_k - F_min against k");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate one problem and write it as JSON");
    ProblemFlags gen_problem;
    gen_problem.add(gen);
    std::string gen_out;
    gen->add_option("--out", gen_out, "Output JSON file")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run solvers over a problem grid");
    std::string bench_solvers = "smisga,isga,ista,fista", grid = "reduced", bench_out, bench_config;
    std::uint64_t bench_seed = kDefaultBaseSeed;
    int jobs = 0;
    Index max_n = 2048;
    bench->add_option("--solvers", bench_solvers, "Comma-separated solver names")->capture_default_str();
    bench->add_option("--grid", grid, "Problem grid")
        ->check(CLI::IsMember({"full", "reduced", "custom"}))
        ->capture_default_str();
    bench->add_option("--max-n", max_n, "Largest n of the reduced grid")->capture_default_str();
    bench->add_option("--out", bench_out, "Records CSV")->required();
    bench->add_option("--seed", bench_seed, "Base seed")->capture_default_str();
    bench->add_option("--jobs", jobs, "Worker threads (default: SMISGA_JOBS or all cores)");
    bench->add_option("--config", bench_config, "JSON configuration file");

    // profile
    auto* profile = app.add_subcommand("profile", "Performance profiles from a records CSV");
    std::string profile_in, profile_prefix = "profile";
    std::vector<std::string> metrics{"cpu_sec", "n_iter", "n_fun"};
    profile->add_option("--records", profile_in, "Records CSV")->required();
    profile->add_option("--out-prefix", profile_prefix, "Writes <prefix>.csv and <prefix>_<metric>.svg")
        ->capture_default_str();
    profile->add_option("--metric", metrics, "Metrics to profile")
        ->check(CLI::IsMember({"cpu_sec", "n_iter", "n_fun"}));

    // report
    auto* report = app.add_subcommand("report", "Cost and relative-error tables from a records CSV");
    std::string report_in, report_format = "text";
    report->add_option("--records", report_in, "Records CSV")->required();
    report->add_option("--format", report_format, "Output format")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();

    // selftest
    auto* selftest = app.add_subcommand("selftest", "Run invariant checks on a small random batch");
    std::uint64_t selftest_seed = kDefaultBaseSeed;
    bool inject_fault = false;
    selftest->add_option("--seed", selftest_seed, "Seed")->capture_default_str();
#if SMISGA_FAULT_INJECTION
    selftest->add_flag("--inject-fault", inject_fault)->group("");
#endif

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve) {
            const RunConfig rc = load_config_opt(solve_config);
            const auto names = split_names(solve_solvers);
            check_solvers(names);
            const ProblemSpec spec = solve_problem.spec();
            SolverConfig cfg = rc.solver;
            cfg.record_trace = !trace_out.empty() || !trace_plot.empty();
            print_resolved(cfg, spec.seed);
            const GeneratedProblem p = generate_problem(spec, cfg.mu);
            std::cout << "# problem " << to_string(spec.ensemble) << " n=" << spec.n << " m=" << spec.m()
                      << " k=" << spec.k() << " h=" << spec.noise_h << '\n';

            std::vector<TraceSeries> series;
            for (std::size_t i = 0; i < names.size(); ++i) {
                const SolveResult r = run_solver(names[i], p.objective, Vector(), cfg);
                std::cout << names[i] << ": status=" << to_string(r.status) << " n_iter=" << r.n_iter
                          << " n_fun=" << r.n_fun << " F=" << format_double(r.final_F)
                          << " rel_err=" << format_double(relative_error(r.x_final, p.xs_true))
                          << " cpu_sec=" << r.cpu_seconds << '\n';
                if (i == 0 && !trace_out.empty()) {
                    auto os = open_out(trace_out);
                    write_trace_csv(os, r.trace);
                    finish_out(os, trace_out);
                }
                TraceSeries s{names[i], {}};
                if (!r.trace.empty()) s.values.push_back(r.trace.front().F);
                for (const auto& t : r.trace) s.values.push_back(t.F_next);
                series.push_back(std::move(s));
            }
            if (!trace_plot.empty()) {
                auto os = open_out(trace_plot);
                write_trace_svg(os, series);
                finish_out(os, trace_plot);
            }
        } else if (*gen) {
            const ProblemSpec spec = gen_problem.spec();
            const SolverConfig cfg;
            print_resolved(cfg, spec.seed);
            const GeneratedProblem p = generate_problem(spec, cfg.mu);
            nlohmann::json j;
            j["ensemble"] = std::string(to_string(spec.ensemble));
            j["n"] = spec.n;
            j["m"] = spec.m();
            j["k"] = spec.k();
            j["delta"] = spec.delta;
            j["rho"] = spec.rho;
            j["noise_h"] = spec.noise_h;
            j["seed"] = spec.seed;
            j["operator_seed"] = mix_seed(spec.seed, {1});
            j["support"] = p.support;
            j["xs_true"] = std::vector<double>(p.xs_true.begin(), p.xs_true.end());
            j["b"] = std::vector<double>(p.objective.b().begin(), p.objective.b().end());
            auto os = open_out(gen_out);
            os << j.dump() << '\n';
            finish_out(os, gen_out);
        } else if (*bench) {
            const RunConfig rc = load_config_opt(bench_config);
            std::vector<std::string> names =
                bench->count("--solvers") || !rc.solvers ? split_names(bench_solvers) : *rc.solvers;
            check_solvers(names);
            const std::uint64_t seed = bench->count("--seed") || !rc.seed ? bench_seed : *rc.seed;
            int workers = jobs > 0 ? jobs : rc.jobs.value_or(default_jobs());

            std::vector<ProblemSpec> specs;
            if (grid == "full") {
                specs = full_grid(seed);
            } else if (grid == "reduced") {
                specs = reduced_grid(seed, max_n);
            } else {
                if (!rc.grid) throw UsageError("--grid custom needs a config file with a \"grid\" section");
                specs = make_grid(*rc.grid, seed);
                std::cout << "# grid " << to_json(*rc.grid).dump() << '\n';
            }
            for (const auto& s : specs) {
                try {
                    s.validate();
                } catch (const std::invalid_argument& e) {
                    throw UsageError("grid cell " + std::to_string(s.problem_id) + ": " + e.what());
                }
            }
            print_resolved(rc.solver, seed);
            std::cout << "# problems " << specs.size() << " solvers " << names.size() << " jobs " << workers << '\n';

            BenchOptions bo;
            bo.jobs = workers;
            const auto records = run_benchmark(specs, names, rc.solver, bo);
            auto os = open_out(bench_out);
            write_records(os, records);
            finish_out(os, bench_out);
            std::size_t failed = 0;
            for (const auto& r : records) failed += !is_success(r.status);
            std::cout << "# wrote " << records.size() << " records to " << bench_out << " (" << failed
                      << " not converged)\n";
        } else if (*profile) {
            std::vector<RunRecord> records;
            try {
                records = read_records(profile_in);
            } catch (const std::exception& e) {
                throw IoError(profile_in + ": " + e.what());
            }
            const std::string csv_path = profile_prefix + ".csv";
            auto csv = open_out(csv_path);
            bool header = true;
            for (const auto& name : metrics) {
                const Metric metric = parse_metric(name);
                const auto curves = performance_profile(records, metric);
                write_profile_csv(csv, metric, curves, header);
                header = false;
                const std::string svg_path = profile_prefix + "_" + name + ".svg";
                auto svg = open_out(svg_path);
                write_profile_svg(svg, metric, curves);
                finish_out(svg, svg_path);
                std::cout << "# wrote " << svg_path << '\n';
            }
            finish_out(csv, csv_path);
            std::cout << "# wrote " << csv_path << '\n';
        } else if (*report) {
            std::vector<RunRecord> records;
            try {
                records = read_records(report_in);
            } catch (const std::exception& e) {
                throw IoError(report_in + ": " + e.what());
            }
            const auto summary = summarize(records);
            if (report_format == "csv")
                write_summary_csv(std::cout, summary);
            else
                write_summary_text(std::cout, summary);
        } else if (*selftest) {
            std::cout << "# seed " << selftest_seed << '\n';
            const auto groups = run_selftest({selftest_seed, inject_fault});
            bool ok = true;
            for (const auto& g : groups) {
                std::cout << (g.passed ? "PASS " : "FAIL ") << g.name << " (" << g.detail << ")\n";
                ok = ok && g.passed;
            }
            return ok ? kOk : kSelftest;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}
