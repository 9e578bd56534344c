#pragma once

#include "smisga/linesearch.hpp"
#include "smisga/solvers.hpp"

#include <cstddef>
#include <limits>
#include <span>

namespace smisga {

struct TraceCheckOptions {
    AcceptanceRule rule = AcceptanceRule::semi_monotone;
    double theta = 1e-10;
    double tau_min = 1e-4;
    double tau_max = 1e4;
    /// Lipschitz constant of grad f (use lipschitz_estimate).
    double L = 1.0;

    static TraceCheckOptions from(const SolverConfig& cfg, AcceptanceRule rule, double L) {
        return {rule, cfg.theta, cfg.tau_min, cfg.tau_max, L};
    }
};

/// Violation counts of the convergence-theory inequalities over Goldstein traces.
struct TraceReport {
    std::size_t steps = 0;
    std::size_t degraded_steps = 0;
    std::size_t efficiency_checked = 0;  // accepted, non-degraded steps

    /// Delta_k <= -||d_k||^2 / (2 tau_k)
    std::size_t descent_violations = 0;
    /// ||d_k||^4 / Delta_k^2 <= 4 tau_max^2
    std::size_t sup_bound_violations = 0;
    /// tau_min <= tau_k <= tau_max
    std::size_t tau_violations = 0;
    /// acceptance rule holds as recorded (non-degraded steps)
    std::size_t acceptance_violations = 0;
    /// F_{k+1} < F_k
    std::size_t decrease_violations = 0;
    /// F_{l(k)} nonincreasing in k
    std::size_t window_violations = 0;
    /// (F_k - F_{k+1}) ||d_k||^2 / Delta_k^2 >= (2 theta / L)(1 - 1e-6) on non-degraded steps
    std::size_t efficiency_violations = 0;
    /// F_{k+1} - R_k >= -alpha^2 L ||d_k||^2 / 2 + alpha Delta_k (hypothesis of the efficiency bound)
    std::size_t hypothesis_violations = 0;
    /// diagnostic: steps inside the relaxed Goldstein bracket
    std::size_t bracket_hits = 0;
    /// smallest efficiency quotient divided by 2 theta / L
    double min_efficiency_margin = std::numeric_limits<double>::infinity();

    void merge(const TraceReport& other);
};

TraceReport check_trace(std::span<const IterationRecord> trace, const TraceCheckOptions& opts);

}  // namespace smisga
