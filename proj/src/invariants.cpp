#include "smisga/invariants.hpp"

#include <algorithm>
#include <cmath>

namespace smisga {

void TraceReport::merge(const TraceReport& o) {
    steps += o.steps;
    degraded_steps += o.degraded_steps;
    efficiency_checked += o.efficiency_checked;
    descent_violations += o.descent_violations;
    sup_bound_violations += o.sup_bound_violations;
    tau_violations += o.tau_violations;
    acceptance_violations += o.acceptance_violations;
    decrease_violations += o.decrease_violations;
    window_violations += o.window_violations;
    efficiency_violations += o.efficiency_violations;
    hypothesis_violations += o.hypothesis_violations;
    bracket_hits += o.bracket_hits;
    min_efficiency_margin = std::min(min_efficiency_margin, o.min_efficiency_margin);
}

TraceReport check_trace(std::span<const IterationRecord> trace, const TraceCheckOptions& opts) {
    TraceReport rep;
    const double gamma = 2.0 * opts.theta / opts.L;
    constexpr double kEps = std::numeric_limits<double>::epsilon();

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const IterationRecord& r = trace[i];
        ++rep.steps;
        if (r.degraded) ++rep.degraded_steps;
        if (r.in_bracket) ++rep.bracket_hits;

        const double d2 = r.d_norm * r.d_norm;
        if (!(r.delta <= -d2 / (2.0 * r.tau))) ++rep.descent_violations;
        if (!(d2 * d2 / (r.delta * r.delta) <= 4.0 * opts.tau_max * opts.tau_max)) ++rep.sup_bound_violations;
        if (!(opts.tau_min <= r.tau && r.tau <= opts.tau_max)) ++rep.tau_violations;
        if (!(r.F_next < r.F)) ++rep.decrease_violations;
        if (i > 0 && r.window_max > trace[i - 1].window_max) ++rep.window_violations;

        // F_{k+1} - R_k carries rounding of order eps * |F|.
        const double slack = 64.0 * kEps * (std::abs(r.F_next) + std::abs(r.R));
        const double hyp_rhs = -0.5 * r.alpha * r.alpha * opts.L * d2 + r.alpha * r.delta;
        if (r.F_next - r.R < hyp_rhs - slack) ++rep.hypothesis_violations;

        if (r.degraded) continue;
        const bool accepted = opts.rule == AcceptanceRule::semi_monotone ? semi_monotone_accept(r.nu, r.lambda, opts.theta)
                                                                         : monotone_accept(r.nu, opts.theta);
        if (!accepted) ++rep.acceptance_violations;

        ++rep.efficiency_checked;
        const double quotient = (r.F - r.F_next) * d2 / (r.delta * r.delta);
        rep.min_efficiency_margin = std::min(rep.min_efficiency_margin, quotient / gamma);
        if (!(quotient >= gamma * (1.0 - 1e-6))) ++rep.efficiency_violations;
    }
    return rep;
}

}  // namespace smisga
