#pragma once

#include "smisga/linesearch.hpp"
#include "smisga/objective.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smisga {

struct SolverConfig {
    double mu = 0x1.0p-8;
    double theta = 1e-10;
    double tau_min = 1e-4;
    double tau_max = 1e4;
    double eta_min = 0.0;
    double eta_max = 1.0;
    int window_N = 10;
    double ftol = 1e-10;
    int max_iter = 10000;
    double backtrack_factor = 0.5;
    int max_backtracks = 50;
    double dtol = 1e-12;
    // Goldstein bracket constants. theta1 gates acceptance when
    // upper_bound_gate is set; theta2 is only reported.
    double theta1 = 0.1;
    double theta2 = 0.9;
    bool upper_bound_gate = true;

    bool allow_expansion = false;
    bool record_trace = false;
    bool record_iterates = false;
    /// Detector-test hook: flips the line-search acceptance inequality.
    bool invert_acceptance = false;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

enum class SolveStatus { converged, max_iterations, line_search_failure, stationary_direction };

std::string_view to_string(SolveStatus s);
SolveStatus parse_status(std::string_view s);

/// True for statuses that count as a solved problem in performance profiles.
inline bool is_success(SolveStatus s) {
    return s == SolveStatus::converged || s == SolveStatus::stationary_direction;
}

/// One accepted step k -> k+1. First-order solvers fill only F, F_next and d_norm.
struct IterationRecord {
    int k = 0;
    double F = 0.0;       // F_k
    double F_next = 0.0;  // F_{k+1}
    double d_norm = 0.0;
    double alpha = 1.0;
    double tau = 0.0;
    double nu = 0.0;
    double lambda = 0.0;
    double eta = 0.0;
    double R = 0.0;
    double window_max = 0.0;  // F_{l(k)}
    double delta = 0.0;       // Delta_k
    double grad_norm = 0.0;   // ||grad f_k||
    int backtracks = 0;
    bool degraded = false;
    // Diagnostic: F_k + theta2 alpha Delta <= F_{k+1} <= R_k + theta1 alpha Delta.
    bool in_bracket = false;
};

struct SolveResult {
    Vector x_final;
    SolveStatus status = SolveStatus::max_iterations;
    int n_iter = 0;
    long n_fun = 0;
    long n_grad = 0;
    double final_F = 0.0;
    double cpu_seconds = 0.0;
    std::vector<IterationRecord> trace;
    std::vector<Vector> iterates;  // x_0, x_1, ... when record_iterates
};

/// Barzilai-Borwein step s^T s / s^T y, falling back to tau_prev when
/// s^T y <= 0, clamped to [tau_min, tau_max].
double bb_tau(const Vector& s, const Vector& y, double tau_prev, const SolverConfig& cfg);

/// |F_next - F_prev| <= ftol * max(|F_prev|, 1e-30), or iterations >= max_iter.
bool stopping_check(double F_prev, double F_next, const SolverConfig& cfg, int iterations = 0);

/// Semi-monotone Goldstein shrinkage iteration.
SolveResult smisga_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg);
/// Monotone Goldstein shrinkage iteration.
SolveResult isga_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg);

/// Fixed step 1/L proximal gradient. When `lipschitz` is empty, L is the power
/// iteration estimate of ||A||^2 inflated by 1%.
SolveResult ista_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg,
                       std::optional<double> lipschitz = {});
/// Accelerated proximal gradient with momentum t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.
SolveResult fista_solve(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg,
                        std::optional<double> lipschitz = {});

/// L used for step sizes and invariant checks: 1.01 * operator_norm_sq(op).
double lipschitz_estimate(const LinearOperator& op);

/// Registered solver names in registration order.
std::span<const std::string_view> solver_names();
bool is_registered_solver(std::string_view name);
/// Runs the named solver. Throws std::invalid_argument for an unknown name.
SolveResult run_solver(std::string_view name, const CompositeObjective& obj, const Vector& x0,
                       const SolverConfig& cfg);

}  // namespace smisga
