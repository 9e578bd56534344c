#include "smisga/selftest.hpp"

#include "smisga/bench.hpp"
#include "smisga/invariants.hpp"
#include "smisga/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace smisga {

namespace {

Vector random_vector(Rng& rng, Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

SelftestGroup operators_group(std::uint64_t seed) {
    SelftestGroup g{"operators: adjoint identity and orthonormal rows", true, ""};
    Rng rng(mix_seed(seed, {10}));
    double worst = 0.0;
    for (EnsembleKind kind : kRandomEnsembles) {
        const LinearOperator op = make_operator({kind, 24, 64, rng.next_u64()});
        for (int t = 0; t < 5; ++t) {
            const Vector x = random_vector(rng, op.cols());
            const Vector y = random_vector(rng, op.rows());
            const double lhs = op.apply(x).dot(y), rhs = x.dot(op.apply_adjoint(y));
            worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
        }
        if (kind == EnsembleKind::orthogonalized_gaussian || kind == EnsembleKind::partial_hadamard ||
            kind == EnsembleKind::partial_dct) {
            const Vector y = random_vector(rng, op.rows());
            worst = std::max(worst, (op.apply(op.apply_adjoint(y)) - y).norm() / y.norm());
        }
    }
    g.passed = worst <= 1e-10;
    g.detail = "max relative defect " + format_double(worst);
    return g;
}

SelftestGroup prox_group(std::uint64_t seed) {
    SelftestGroup g{"shrinkage: optimality and nonexpansiveness", true, ""};
    Rng rng(mix_seed(seed, {11}));
    std::size_t bad = 0;
    for (int t = 0; t < 200; ++t) {
        const Vector x = 3.0 * random_vector(rng, 16), y = 3.0 * random_vector(rng, 16);
        const double theta = 2.0 * rng.uniform();
        const Vector px = shrinkage(x, theta), py = shrinkage(y, theta);
        // subgradient condition: x - p in theta * d|p|
        for (Index i = 0; i < x.size(); ++i) {
            const double r = x[i] - px[i];
            const bool ok = px[i] == 0.0 ? std::abs(r) <= theta * (1 + 1e-12)
                                         : std::abs(r - theta * (px[i] > 0 ? 1.0 : -1.0)) <= 1e-12 * (1 + theta);
            if (!ok) ++bad;
        }
        if ((px - py).squaredNorm() > (px - py).dot(x - y) + 1e-10 * (1 + x.norm() + y.norm())) ++bad;
    }
    g.passed = bad == 0;
    g.detail = std::to_string(bad) + " violations";
    return g;
}

SelftestGroup window_group(std::uint64_t seed) {
    SelftestGroup g{"nonmonotone window: bounds and reference value", true, ""};
    Rng rng(mix_seed(seed, {12}));
    std::size_t bad = 0;
    NonmonotoneState nm(10, 0.0, 1.0);
    double F = 100.0;
    for (int t = 0; t < 500; ++t) {
        F -= rng.uniform();
        nm.push(F);
        nm.update_eta(rng.coin() ? 1e-3 : 1.0);
        const auto w = nm.window();
        const double wmax = *std::max_element(w.begin(), w.end());
        const double R = nm.reference_value(F);
        if (nm.size() > 10 || nm.window_max() != wmax) ++bad;
        if (!(F <= R && R <= wmax)) ++bad;
        if (!(0.0 <= nm.eta() && nm.eta() <= 1.0)) ++bad;
    }
    g.passed = bad == 0;
    g.detail = std::to_string(bad) + " violations";
    return g;
}

}  // namespace

std::vector<SelftestGroup> run_selftest(const SelftestOptions& opts) {
    std::vector<SelftestGroup> out{operators_group(opts.seed), prox_group(opts.seed), window_group(opts.seed)};

    SolverConfig cfg;
    cfg.max_iter = 1500;
    cfg.record_trace = true;
    cfg.invert_acceptance = opts.inject_fault;

    TraceReport sm, is;
    std::size_t solves = 0, nonfinite = 0;
    for (std::size_t i = 0; i < std::size(kRandomEnsembles); ++i) {
        ProblemSpec spec;
        spec.problem_id = i;
        spec.ensemble = kRandomEnsembles[i];
        spec.n = 256;
        spec.delta = 0.3;
        spec.rho = 0.1;
        spec.noise_h = i % 2 ? 7 : 1;
        spec.seed = mix_seed(opts.seed, {20, i});
        const GeneratedProblem p = generate_problem(spec, cfg.mu);
        const double L = lipschitz_estimate(p.objective.op());
        for (auto rule : {AcceptanceRule::semi_monotone, AcceptanceRule::monotone}) {
            const SolveResult r = rule == AcceptanceRule::semi_monotone ? smisga_solve(p.objective, Vector(), cfg)
                                                                        : isga_solve(p.objective, Vector(), cfg);
            ++solves;
            if (!std::isfinite(r.final_F)) ++nonfinite;
            (rule == AcceptanceRule::semi_monotone ? sm : is).merge(check_trace(r.trace, TraceCheckOptions::from(cfg, rule, L)));
        }
    }
    TraceReport all = sm;
    all.merge(is);

    auto group = [](std::string name, std::size_t violations, std::string extra = "") {
        std::ostringstream d;
        d << violations << " violations" << extra;
        return SelftestGroup{std::move(name), violations == 0, d.str()};
    };
    out.push_back(group("solvers: finite results", nonfinite, " over " + std::to_string(solves) + " solves"));
    out.push_back(group("descent bound Delta <= -||d||^2/(2 tau)", all.descent_violations,
                        " over " + std::to_string(all.steps) + " steps"));
    out.push_back(group("ratio bound ||d||^4/Delta^2 <= 4 tau_max^2", all.sup_bound_violations + all.tau_violations));
    out.push_back(group("semi-monotone acceptance nu|1-lambda| >= theta",
                        sm.acceptance_violations + sm.decrease_violations + sm.window_violations));
    out.push_back(group("monotone acceptance nu|nu-1| >= theta",
                        is.acceptance_violations + is.decrease_violations + is.window_violations));
    out.push_back(group("efficiency bound (F_k-F_k+1)||d||^2/Delta^2 >= 2 theta/L", all.efficiency_violations,
                        ", hypothesis violations " + std::to_string(sm.hypothesis_violations) + " (reported only)"));
    return out;
}

}  // namespace smisga
