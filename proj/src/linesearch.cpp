#include "smisga/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace smisga {

NonmonotoneState::NonmonotoneState(std::size_t capacity, double eta_min, double eta_max, double eta0)
    : capacity_(capacity), eta_min_(eta_min), eta_max_(eta_max) {
    if (capacity == 0) throw std::invalid_argument("window capacity must be positive");
    if (!(0.0 <= eta_min && eta_min <= eta_max && eta_max <= 1.0))
        throw std::invalid_argument("need 0 <= eta_min <= eta_max <= 1");
    eta_ = std::clamp(eta0, eta_min_, eta_max_);
}

void NonmonotoneState::push(double F) {
    if (!std::isfinite(F)) throw std::invalid_argument("window_push: non-finite objective value");
    window_.push_back(F);
    if (window_.size() > capacity_) window_.pop_front();
}

double NonmonotoneState::window_max() const {
    if (window_.empty()) throw std::logic_error("window_max on an empty window");
    return *std::max_element(window_.begin(), window_.end());
}

double NonmonotoneState::reference_value(double F_k) const {
    // eta * max + (1 - eta) * F, rearranged so that rounding cannot leave [F_k, max]
    const double top = std::max(window_max(), F_k);
    return std::clamp(F_k + eta_ * (top - F_k), F_k, top);
}

void NonmonotoneState::update_eta(double grad_norm) {
    if (grad_norm <= 1e-2)
        eta_ = 2.0 / 3.0 * eta_ + 0.01;
    else
        eta_ = std::max(0.99 * eta_, 0.5);
    eta_ = std::clamp(eta_, eta_min_, eta_max_);
}

GoldsteinQuotients goldstein_quotients(double F_k, double F_next, double R_k, double alpha, double delta) {
    if (!(alpha > 0.0)) throw std::logic_error("goldstein_quotients: alpha must be positive");
    if (!(delta < 0.0)) throw std::logic_error("goldstein_quotients: direction is not a descent direction");
    const double model = alpha * delta;
    return {(F_next - F_k) / model, (F_next - R_k) / model};
}

bool semi_monotone_accept(double nu, double lambda, double theta) { return nu * std::abs(1.0 - lambda) >= theta; }

bool monotone_accept(double nu, double theta) { return nu * std::abs(nu - 1.0) >= theta; }

namespace {

bool rule_accepts(const LineSearchOptions& opts, const GoldsteinQuotients& q) {
    const bool semi = opts.rule == AcceptanceRule::semi_monotone;
    bool ok = semi ? semi_monotone_accept(q.nu, q.lambda, opts.theta) : monotone_accept(q.nu, opts.theta);
    if (opts.upper_bound_gate) ok = ok && upper_bound_holds(semi ? q.lambda : q.nu, opts.theta1);
    return opts.invert_acceptance ? !ok : ok;
}

struct Trial {
    double alpha;
    Vector x;
    Evaluation eval;
    GoldsteinQuotients q;
};

Trial run_trial(const CompositeObjective& obj, const Vector& x, const Vector& d, double alpha, double delta,
                double R_k, double F_k, Counters& counters) {
    Trial t{alpha, x + alpha * d, {}, {}};
    t.eval = evaluate(obj, t.x, counters);
    t.q = goldstein_quotients(F_k, t.eval.F, R_k, alpha, delta);
    return t;
}

LineSearchOutcome finish(Trial&& t, int backtracks, bool accepted, bool degraded) {
    LineSearchOutcome out;
    out.alpha = t.alpha;
    out.F_next = t.eval.F;
    out.nu = t.q.nu;
    out.lambda = t.q.lambda;
    out.backtracks = backtracks;
    out.accepted = accepted;
    out.degraded = degraded;
    out.x_next = std::move(t.x);
    out.eval = std::move(t.eval);
    return out;
}

}  // namespace

LineSearchOutcome search_alpha(const CompositeObjective& obj, const Vector& x, const Vector& d, double delta,
                               double R_k, double F_k, const LineSearchOptions& opts, Counters& counters) {
    if (!(delta < 0.0)) throw std::logic_error("search_alpha: Delta must be negative");
    if (d.size() == 0 || d.isZero(0.0)) throw std::logic_error("search_alpha: zero direction");

    std::optional<Trial> best;
    double alpha = 1.0;
    for (int j = 0; j <= opts.max_backtracks; ++j, alpha *= opts.backtrack_factor) {
        Trial t = run_trial(obj, x, d, alpha, delta, R_k, F_k, counters);
        if (!std::isfinite(t.eval.F)) continue;

        if (rule_accepts(opts, t.q)) {
            if (opts.allow_expansion && j == 0) {
                for (int e = 0; e < opts.max_backtracks; ++e) {
                    Trial bigger = run_trial(obj, x, d, 2.0 * t.alpha, delta, R_k, F_k, counters);
                    if (!std::isfinite(bigger.eval.F) || bigger.eval.F >= t.eval.F || !rule_accepts(opts, bigger.q))
                        break;
                    t = std::move(bigger);
                }
            }
            return finish(std::move(t), j, true, false);
        }
        if (t.eval.F < F_k && (!best || t.eval.F < best->eval.F)) best = std::move(t);
    }

    if (best) return finish(std::move(*best), opts.max_backtracks, true, true);
    LineSearchOutcome failed;
    failed.backtracks = opts.max_backtracks;
    return failed;
}

}  // namespace smisga
