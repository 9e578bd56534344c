#pragma once

#include "smisga/objective.hpp"

#include <cstddef>
#include <deque>
#include <vector>

namespace smisga {

/// Sliding window of the last N accepted objective values plus the
/// relaxation weight eta that blends the window maximum into the reference
/// value R_k = eta * max(window) + (1 - eta) * F_k.
class NonmonotoneState {
public:
    static constexpr double kInitialEta = 0.5;

    /// Throws std::invalid_argument unless capacity >= 1 and
    /// 0 <= eta_min <= eta_max <= 1.
    NonmonotoneState(std::size_t capacity, double eta_min, double eta_max, double eta0 = kInitialEta);

    /// Appends F, evicting the oldest value once `capacity` is exceeded.
    /// Throws std::invalid_argument for a non-finite F.
    void push(double F);

    /// Throws std::logic_error on an empty window.
    double window_max() const;
    double reference_value(double F_k) const;

    /// eta <- 2/3 eta + 0.01 if grad_norm <= 1e-2, else max(0.99 eta, 0.5);
    /// then clamped to [eta_min, eta_max].
    void update_eta(double grad_norm);

    double eta() const { return eta_; }
    std::size_t size() const { return window_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::vector<double> window() const { return {window_.begin(), window_.end()}; }

private:
    std::deque<double> window_;
    std::size_t capacity_;
    double eta_;
    double eta_min_;
    double eta_max_;
};

struct GoldsteinQuotients {
    double nu;
    double lambda;
};

/// nu = (F_next - F_k) / (alpha Delta), lambda = (F_next - R_k) / (alpha Delta).
/// Throws std::logic_error unless alpha > 0 and Delta < 0.
GoldsteinQuotients goldstein_quotients(double F_k, double F_next, double R_k, double alpha, double delta);

/// nu * |1 - lambda| >= theta.
bool semi_monotone_accept(double nu, double lambda, double theta);
/// nu * |nu - 1| >= theta.
bool monotone_accept(double nu, double theta);
/// Upper Goldstein bound F_next <= ref + theta1 alpha Delta, written as
/// quotient >= theta1 (lambda against R_k, nu against F_k).
inline bool upper_bound_holds(double quotient, double theta1) { return quotient >= theta1; }

enum class AcceptanceRule { semi_monotone, monotone };

struct LineSearchOptions {
    AcceptanceRule rule = AcceptanceRule::semi_monotone;
    double theta = 1e-10;
    /// Also require the upper Goldstein bound with constant theta1.
    bool upper_bound_gate = true;
    double theta1 = 0.1;
    double backtrack_factor = 0.5;
    int max_backtracks = 50;
    /// After acceptance at alpha = 1, keep doubling while the rule still
    /// accepts and F keeps dropping.
    bool allow_expansion = false;
    /// Fault injection for detector tests: accept exactly when the rule rejects.
    bool invert_acceptance = false;
};

struct LineSearchOutcome {
    double alpha = 0.0;
    double F_next = 0.0;
    double nu = 0.0;
    double lambda = 0.0;
    int backtracks = 0;
    bool accepted = false;
    /// Accepted as the best strictly decreasing trial after the backtrack
    /// budget ran out, without meeting the acceptance rule.
    bool degraded = false;
    Vector x_next;
    Evaluation eval;  // at x_next
};

/// Backtracking search alpha = 1, beta, beta^2, ... for the first step the
/// acceptance rule admits. Every trial is one objective evaluation. Throws
/// std::logic_error if Delta >= 0 or d == 0.
LineSearchOutcome search_alpha(const CompositeObjective& obj, const Vector& x, const Vector& d, double delta,
                               double R_k, double F_k, const LineSearchOptions& opts, Counters& counters);

}  // namespace smisga
