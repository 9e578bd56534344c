#include "helpers.hpp"
#include "smisga/bench.hpp"
#include "smisga/invariants.hpp"
#include "smisga/solvers.hpp"

#include <doctest.h>

#include <cmath>

using namespace smisga;
using test::dense_objective;
using test::random_vector;

namespace {

CompositeObjective small_random(Rng& rng, Index m = 20, Index n = 40) {
    const Matrix a = test::random_matrix(rng, m, n);
    Vector xs = Vector::Zero(n);
    for (auto i : rng.sample_indices(std::size_t(n), 4)) xs[Index(i)] = rng.normal();
    return dense_objective(a, a * xs + 0.01 * random_vector(rng, m), 0.05);
}

}  // namespace

TEST_CASE("config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = [](auto edit) {
        SolverConfig b;
        edit(b);
        CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    };
    bad([](SolverConfig& b) { b.mu = 0; });
    bad([](SolverConfig& b) { b.tau_min = 2e4; });
    bad([](SolverConfig& b) { b.eta_min = 0.6, b.eta_max = 0.5; });
    bad([](SolverConfig& b) { b.eta_max = 1.5; });
    bad([](SolverConfig& b) { b.theta1 = 0.95; });
    bad([](SolverConfig& b) { b.window_N = 0; });
    bad([](SolverConfig& b) { b.backtrack_factor = 1.0; });
    bad([](SolverConfig& b) { b.max_iter = 0; });
}

TEST_CASE("bb step") {
    SolverConfig cfg;
    Rng rng(1);
    const Vector s = random_vector(rng, 5);
    CHECK(bb_tau(s, s, 0.3, cfg) == doctest::Approx(1.0));
    CHECK(bb_tau(s, 1e-6 * s, 0.3, cfg) == 1e4);
    CHECK(bb_tau(s, 1e6 * s, 0.3, cfg) == 1e-4);
    CHECK(bb_tau(s, -s, 0.3, cfg) == 0.3);
    CHECK(bb_tau(s, -s, 5e4, cfg) == 1e4);
    CHECK(bb_tau(Vector::Zero(5), Vector::Zero(5), 2.0, cfg) == 2.0);

    // orthonormal square operator: y = A^T A s = s
    const LinearOperator q = make_operator({EnsembleKind::orthogonalized_gaussian, 8, 8, 3});
    const Vector t = random_vector(rng, 8);
    CHECK(bb_tau(t, q.apply_adjoint(q.apply(t)), 0.3, cfg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stopping rule") {
    SolverConfig cfg;
    CHECK(stopping_check(1.0, 1.0 + 1e-12, cfg));
    CHECK_FALSE(stopping_check(1.0, 0.5, cfg));
    CHECK(stopping_check(0.0, 0.0, cfg));
    CHECK(stopping_check(1.0, 0.5, cfg, cfg.max_iter));
    CHECK_FALSE(stopping_check(1.0, 0.5, cfg, cfg.max_iter - 1));
}

TEST_CASE("zero data stops at once") {
    const auto obj = dense_objective(Matrix::Identity(3, 3), Vector::Zero(3), 1.0);
    for (auto name : solver_names()) {
        CAPTURE(name);
        const SolveResult r = run_solver(name, obj, Vector(), SolverConfig{});
        CHECK(r.x_final == Vector::Zero(3));
        CHECK(r.final_F == 0.0);
        if (name == "smisga" || name == "isga") {
            CHECK(r.status == SolveStatus::stationary_direction);
            CHECK(r.n_iter == 0);
        }
    }
}

TEST_CASE("every solver finds the scalar minimizer") {
    const auto obj = test::scalar_objective();
    SolverConfig cfg;
    cfg.ftol = 1e-16;
    cfg.record_trace = true;
    for (auto name : solver_names()) {
        CAPTURE(name);
        const SolveResult r = run_solver(name, obj, Vector(), cfg);
        CHECK(is_success(r.status));
        CHECK(std::abs(r.x_final[0] - 0.75) <= 1e-8);
        CHECK(r.n_fun >= r.n_iter);
        if (name == "isga" || name == "smisga")
            for (const auto& t : r.trace) CHECK(t.F_next < t.F);
    }
}

TEST_CASE("reduction: no window and eta 0 gives the monotone iteration bit for bit") {
    SolverConfig cfg;
    cfg.eta_max = 0.0;
    cfg.window_N = 1;
    cfg.record_iterates = true;
    cfg.max_iter = 300;
    Rng rng(12);
    for (int t = 0; t < 5; ++t) {
        const auto obj = small_random(rng);
        const SolveResult a = smisga_solve(obj, Vector(), cfg), b = isga_solve(obj, Vector(), cfg);
        REQUIRE(a.iterates.size() == b.iterates.size());
        for (std::size_t k = 0; k < a.iterates.size(); ++k) CHECK((a.iterates[k].array() == b.iterates[k].array()).all());
        CHECK(a.n_fun == b.n_fun);
    }
}

TEST_CASE("goldstein solvers satisfy their trace invariants") {
    SolverConfig cfg;
    cfg.record_trace = true;
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        const auto obj = small_random(rng);
        const double L = lipschitz_estimate(obj.op());
        for (auto rule : {AcceptanceRule::semi_monotone, AcceptanceRule::monotone}) {
            const SolveResult r = rule == AcceptanceRule::semi_monotone ? smisga_solve(obj, Vector(), cfg)
                                                                        : isga_solve(obj, Vector(), cfg);
            CHECK(r.status == SolveStatus::converged);
            CHECK(r.n_fun >= r.n_iter);
            REQUIRE(r.trace.size() == std::size_t(r.n_iter));
            const TraceReport rep = check_trace(r.trace, TraceCheckOptions::from(cfg, rule, L));
            CHECK(rep.descent_violations == 0);
            CHECK(rep.sup_bound_violations == 0);
            CHECK(rep.tau_violations == 0);
            CHECK(rep.acceptance_violations == 0);
            CHECK(rep.decrease_violations == 0);
            CHECK(rep.window_violations == 0);
            CHECK(rep.efficiency_violations == 0);
            if (rule == AcceptanceRule::monotone) CHECK(rep.hypothesis_violations == 0);
            for (const auto& s : r.trace) {
                CHECK(s.R >= s.F);
                CHECK(s.lambda >= s.nu);
            }
        }
    }
}

TEST_CASE("stationarity on small instances") {
    SolverConfig cfg;
    cfg.ftol = 1e-15;
    Rng rng(14);
    for (int t = 0; t < 5; ++t) {
        const auto obj = small_random(rng, 30, 64);
        for (auto name : {"smisga", "isga"}) {
            const SolveResult r = run_solver(name, obj, Vector(), cfg);
            Counters c;
            const Vector g = grad_f(obj, evaluate(obj, r.x_final, c).residual, c);
            CHECK(direction(obj, r.x_final, g, 1.0 / lipschitz_estimate(obj.op())).norm() <= 1e-8);
        }
    }
}

TEST_CASE("ista and fista agree with each other") {
    Rng rng(15);
    for (int t = 0; t < 5; ++t) {
        const auto obj = small_random(rng);
        SolverConfig cfg;
        cfg.ftol = 1e-14;
        cfg.max_iter = 200000;
        cfg.record_trace = true;
        const SolveResult i = ista_solve(obj, Vector(), cfg), f = fista_solve(obj, Vector(), cfg);
        CHECK(std::abs(i.final_F - f.final_F) <= 1e-8);
        for (const auto& s : i.trace) CHECK(s.F_next <= s.F + 1e-15 * std::abs(s.F));

        SolverConfig capped;
        capped.max_iter = 50;
        CHECK(fista_solve(obj, Vector(), capped).final_F <= ista_solve(obj, Vector(), capped).final_F + 1e-8);
    }
}

TEST_CASE("fista started at the solution stops at the first check") {
    Rng rng(16);
    const auto obj = small_random(rng);
    SolverConfig cfg;
    cfg.ftol = 1e-14;
    cfg.max_iter = 200000;
    const SolveResult ref = fista_solve(obj, Vector(), cfg);
    const SolveResult again = fista_solve(obj, ref.x_final, SolverConfig{});
    CHECK(again.n_iter == 1);
    CHECK(again.status == SolveStatus::converged);
}

TEST_CASE("iteration cap is reported") {
    Rng rng(17);
    const auto obj = small_random(rng);
    SolverConfig cfg;
    cfg.max_iter = 3;
    for (auto name : solver_names()) {
        const SolveResult r = run_solver(name, obj, Vector(), cfg);
        CHECK(r.status == SolveStatus::max_iterations);
        CHECK(r.n_iter == 3);
    }
}

TEST_CASE("status names and registry") {
    for (auto s : {SolveStatus::converged, SolveStatus::max_iterations, SolveStatus::line_search_failure,
                   SolveStatus::stationary_direction})
        CHECK(parse_status(to_string(s)) == s);
    CHECK(to_string(SolveStatus::converged) == "Converged");
    CHECK_THROWS_AS(parse_status("Done"), std::invalid_argument);
    CHECK(solver_names().size() == 4);
    CHECK(is_registered_solver("smisga"));
    CHECK_FALSE(is_registered_solver("twist"));
    CHECK_THROWS_AS(run_solver("twist", test::scalar_objective(), Vector(), SolverConfig{}), std::invalid_argument);
}

TEST_CASE("trace checker flags broken records") {
    IterationRecord r;
    r.F = 1.0;
    r.F_next = 0.9;
    r.d_norm = 1.0;
    r.alpha = 1.0;
    r.tau = 1.0;
    r.delta = -0.5;  // exactly -||d||^2 / (2 tau)
    r.R = 1.0;
    r.nu = 0.2;
    r.lambda = 0.2;
    r.window_max = 1.0;
    TraceCheckOptions o;
    o.L = 1.0;
    CHECK(check_trace(std::vector{r}, o).descent_violations == 0);

    IterationRecord bad = r;
    bad.delta = -0.4;
    bad.F_next = 1.1;
    bad.nu = -0.25;
    IterationRecord second = r;
    second.window_max = 2.0;
    IterationRecord third = r;
    third.window_max = 2.0;
    third.tau = 2e4;
    third.delta = -1.0;
    const TraceReport rep = check_trace(std::vector{bad, second, third}, o);
    CHECK(rep.descent_violations == 1);
    CHECK(rep.decrease_violations == 1);
    CHECK(rep.acceptance_violations == 1);
    CHECK(rep.tau_violations == 1);
    CHECK(rep.efficiency_violations == 1);
    CHECK(rep.window_violations == 1);
}
