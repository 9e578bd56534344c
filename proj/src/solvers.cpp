#include "smisga/solvers.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smisga {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Vector initial_point(const CompositeObjective& obj, const Vector& x0) {
    if (x0.size() == 0) return Vector::Zero(obj.dim());
    if (x0.size() != obj.dim()) throw std::invalid_argument("x0 has the wrong length");
    return x0;
}

SolveResult goldstein_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg,
                            AcceptanceRule rule) {
    cfg.validate();
    const auto start = Clock::now();
    const bool semi = rule == AcceptanceRule::semi_monotone;

    SolveResult res;
    Counters counters;
    Vector x = initial_point(obj, x0);
    Evaluation ev = evaluate(obj, x, counters);
    Vector g = grad_f(obj, ev.residual, counters);
    double tau = std::clamp(1.0, cfg.tau_min, cfg.tau_max);

    // The monotone method is the N = 1, eta = 0 instance: R_k = F_k.
    NonmonotoneState nm(semi ? static_cast<std::size_t>(cfg.window_N) : 1, semi ? cfg.eta_min : 0.0,
                        semi ? cfg.eta_max : 0.0);
    nm.push(ev.F);

    LineSearchOptions opts;
    opts.rule = rule;
    opts.theta = cfg.theta;
    opts.upper_bound_gate = cfg.upper_bound_gate;
    opts.theta1 = cfg.theta1;
    opts.backtrack_factor = cfg.backtrack_factor;
    opts.max_backtracks = cfg.max_backtracks;
    opts.allow_expansion = cfg.allow_expansion;
    opts.invert_acceptance = cfg.invert_acceptance;

    if (cfg.record_iterates) res.iterates.push_back(x);

    for (int k = 0;; ++k) {
        if (k >= cfg.max_iter) {
            res.status = SolveStatus::max_iterations;
            break;
        }
        const Vector d = direction(obj, x, g, tau);
        const double d_norm = d.norm();
        if (d_norm <= cfg.dtol) {
            res.status = SolveStatus::stationary_direction;
            break;
        }
        const double delta = descent_measure(obj, x, d, g);
        if (!(delta < 0.0)) {
            // Only reachable through rounding once d is at noise level.
            res.status = SolveStatus::stationary_direction;
            break;
        }
        const double window_max = nm.window_max();
        const double R = nm.reference_value(ev.F);

        LineSearchOutcome ls = search_alpha(obj, x, d, delta, R, ev.F, opts, counters);
        if (!ls.accepted) {
            res.status = SolveStatus::line_search_failure;
            break;
        }
        Vector g_next = grad_f(obj, ls.eval.residual, counters);

        if (cfg.record_trace) {
            IterationRecord r;
            r.k = k;
            r.F = ev.F;
            r.F_next = ls.F_next;
            r.d_norm = d_norm;
            r.alpha = ls.alpha;
            r.tau = tau;
            r.nu = ls.nu;
            r.lambda = ls.lambda;
            r.eta = nm.eta();
            r.R = R;
            r.window_max = window_max;
            r.delta = delta;
            r.grad_norm = g.norm();
            r.backtracks = ls.backtracks;
            r.degraded = ls.degraded;
            const double model = ls.alpha * delta;
            r.in_bracket = ev.F + cfg.theta2 * model <= ls.F_next && ls.F_next <= R + cfg.theta1 * model;
            res.trace.push_back(r);
        }

        const Vector s = ls.x_next - x;
        const Vector y = g_next - g;
        tau = bb_tau(s, y, tau, cfg);

        const double F_prev = ev.F;
        x = std::move(ls.x_next);
        ev = std::move(ls.eval);
        g = std::move(g_next);
        ++res.n_iter;
        if (cfg.record_iterates) res.iterates.push_back(x);

        nm.push(ev.F);
        nm.update_eta(g.norm());

        if (stopping_check(F_prev, ev.F, cfg)) {
            res.status = SolveStatus::converged;
            break;
        }
    }

    res.x_final = std::move(x);
    res.final_F = ev.F;
    res.n_fun = counters.n_fun;
    res.n_grad = counters.n_grad;
    res.cpu_seconds = seconds_since(start);
    return res;
}

void record_plain_step(SolveResult& res, const SolverConfig& cfg, int k, double F, double F_next, double d_norm) {
    if (!cfg.record_trace) return;
    IterationRecord r;
    r.k = k;
    r.F = F;
    r.F_next = F_next;
    r.d_norm = d_norm;
    res.trace.push_back(r);
}

}  // namespace

void SolverConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid solver config: " + what); };
    if (!(mu > 0.0)) fail("mu must be positive");
    if (!(theta > 0.0)) fail("theta must be positive");
    if (!(tau_min > 0.0 && tau_min <= tau_max)) fail("need 0 < tau_min <= tau_max");
    if (!(0.0 <= eta_min && eta_min <= eta_max && eta_max <= 1.0)) fail("need 0 <= eta_min <= eta_max <= 1");
    if (window_N < 1) fail("window_N must be positive");
    if (!(ftol > 0.0)) fail("ftol must be positive");
    if (max_iter < 1) fail("max_iter must be positive");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) fail("backtrack_factor must lie in (0, 1)");
    if (max_backtracks < 1) fail("max_backtracks must be positive");
    if (!(dtol >= 0.0)) fail("dtol must be nonnegative");
    if (!(0.0 < theta1 && theta1 < theta2 && theta2 < 1.0)) fail("need 0 < theta1 < theta2 < 1");
}

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "Converged";
        case SolveStatus::max_iterations: return "MaxIterations";
        case SolveStatus::line_search_failure: return "LineSearchFailure";
        case SolveStatus::stationary_direction: return "StationaryDirection";
    }
    return "Unknown";
}

SolveStatus parse_status(std::string_view s) {
    for (auto st : {SolveStatus::converged, SolveStatus::max_iterations, SolveStatus::line_search_failure,
                    SolveStatus::stationary_direction})
        if (to_string(st) == s) return st;
    throw std::invalid_argument("unknown solver status: " + std::string(s));
}

double bb_tau(const Vector& s, const Vector& y, double tau_prev, const SolverConfig& cfg) {
    const double sy = s.dot(y);
    const double raw = sy > 0.0 ? s.squaredNorm() / sy : tau_prev;
    return std::clamp(raw, cfg.tau_min, cfg.tau_max);
}

bool stopping_check(double F_prev, double F_next, const SolverConfig& cfg, int iterations) {
    constexpr double kFloor = 1e-30;
    if (iterations >= cfg.max_iter) return true;
    return std::abs(F_next - F_prev) <= cfg.ftol * std::max(std::abs(F_prev), kFloor);
}

SolveResult smisga_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg) {
    return goldstein_solve(obj, x0, cfg, AcceptanceRule::semi_monotone);
}

SolveResult isga_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg) {
    return goldstein_solve(obj, x0, cfg, AcceptanceRule::monotone);
}

double lipschitz_estimate(const LinearOperator& op) { return 1.01 * operator_norm_sq(op); }

SolveResult ista_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg,
                       std::optional<double> lipschitz) {
    cfg.validate();
    const auto start = Clock::now();
    const double L = lipschitz ? *lipschitz : lipschitz_estimate(obj.op());
    if (!(L > 0.0)) throw std::invalid_argument("ista_solve: Lipschitz constant must be positive");

    SolveResult res;
    Counters counters;
    Vector x = initial_point(obj, x0);
    Evaluation ev = evaluate(obj, x, counters);
    Vector x_new;
    if (cfg.record_iterates) res.iterates.push_back(x);

    for (int k = 0;; ++k) {
        if (k >= cfg.max_iter) {
            res.status = SolveStatus::max_iterations;
            break;
        }
        const Vector g = grad_f(obj, ev.residual, counters);
        shrinkage_into(x - g / L, obj.mu() / L, x_new);
        const double d_norm = (x_new - x).norm();
        if (d_norm <= cfg.dtol) {
            res.status = SolveStatus::stationary_direction;
            break;
        }
        Evaluation ev_new = evaluate(obj, x_new, counters);
        record_plain_step(res, cfg, k, ev.F, ev_new.F, d_norm);
        const double F_prev = ev.F;
        std::swap(x, x_new);
        ev = std::move(ev_new);
        ++res.n_iter;
        if (cfg.record_iterates) res.iterates.push_back(x);
        if (stopping_check(F_prev, ev.F, cfg)) {
            res.status = SolveStatus::converged;
            break;
        }
    }

    res.x_final = std::move(x);
    res.final_F = ev.F;
    res.n_fun = counters.n_fun;
    res.n_grad = counters.n_grad;
    res.cpu_seconds = seconds_since(start);
    return res;
}

SolveResult fista_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg,
                        std::optional<double> lipschitz) {
    cfg.validate();
    const auto start = Clock::now();
    const double L = lipschitz ? *lipschitz : lipschitz_estimate(obj.op());
    if (!(L > 0.0)) throw std::invalid_argument("fista_solve: Lipschitz constant must be positive");

    SolveResult res;
    Counters counters;
    Vector x = initial_point(obj, x0);
    Evaluation ev = evaluate(obj, x, counters);
    // A y - b is an affine combination of the residuals at x_k and x_{k-1},
    // so the extrapolated point needs no extra operator application.
    Vector y = x;
    Vector r_y = ev.residual;
    double t = 1.0;
    Vector x_new;
    if (cfg.record_iterates) res.iterates.push_back(x);

    for (int k = 0;; ++k) {
        if (k >= cfg.max_iter) {
            res.status = SolveStatus::max_iterations;
            break;
        }
        const Vector g = grad_f(obj, r_y, counters);
        shrinkage_into(y - g / L, obj.mu() / L, x_new);
        Evaluation ev_new = evaluate(obj, x_new, counters);
        const double d_norm = (x_new - x).norm();
        record_plain_step(res, cfg, k, ev.F, ev_new.F, d_norm);

        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double momentum = (t - 1.0) / t_new;
        y = x_new + momentum * (x_new - x);
        r_y = ev_new.residual + momentum * (ev_new.residual - ev.residual);
        t = t_new;

        const double F_prev = ev.F;
        std::swap(x, x_new);
        ev = std::move(ev_new);
        ++res.n_iter;
        if (cfg.record_iterates) res.iterates.push_back(x);
        if (stopping_check(F_prev, ev.F, cfg)) {
            res.status = SolveStatus::converged;
            break;
        }
    }

    res.x_final = std::move(x);
    res.final_F = ev.F;
    res.n_fun = counters.n_fun;
    res.n_grad = counters.n_grad;
    res.cpu_seconds = seconds_since(start);
    return res;
}

namespace {
constexpr std::array<std::string_view, 4> kSolverNames = {"smisga", "isga", "ista", "fista"};
}

std::span<const std::string_view> solver_names() { return kSolverNames; }

bool is_registered_solver(std::string_view name) {
    return std::find(kSolverNames.begin(), kSolverNames.end(), name) != kSolverNames.end();
}

SolveResult run_solver(std::string_view name, const CompositeObjective& obj, const Vector& x0,
                       const SolverConfig& cfg) {
    if (name == "smisga") return smisga_solve(obj, x0, cfg);
    if (name == "isga") return isga_solve(obj, x0, cfg);
    if (name == "ista") return ista_solve(obj, x0, cfg);
    if (name == "fista") return fista_solve(obj, x0, cfg);
    throw std::invalid_argument("unknown solver: " + std::string(name));
}

}  // namespace smisga
