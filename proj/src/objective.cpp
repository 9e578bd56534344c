#include "smisga/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace smisga {

double Regularizer::value_change(const Vector& x, const Vector& d) const {
    const Vector moved = x + d;
    return value(moved) - value(x);
}

double L1Norm::value(const Vector& x) const { return x.lpNorm<1>(); }

void L1Norm::prox(const Vector& x, double theta, Vector& out) const { shrinkage_into(x, theta, out); }

double L1Norm::value_change(const Vector& x, const Vector& d) const {
    // Per coordinate: where x_i and x_i + d_i share a sign the change is
    // exactly +-d_i; otherwise both magnitudes are bounded by |d_i|.
    double sum = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double pi = xi + d[i];
        if (xi >= 0.0 && pi >= 0.0)
            sum += d[i];
        else if (xi <= 0.0 && pi <= 0.0)
            sum -= d[i];
        else
            sum += std::abs(pi) - std::abs(xi);
    }
    return sum;
}

void shrinkage_into(const Vector& x, double theta, Vector& out) {
    out.resize(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        const double mag = std::abs(x[i]) - theta;
        out[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
    }
}

Vector shrinkage(const Vector& x, double theta) {
    Vector out;
    shrinkage_into(x, theta, out);
    return out;
}

CompositeObjective::CompositeObjective(std::shared_ptr<const LinearOperator> op, Vector b, double mu,
                                       std::shared_ptr<const Regularizer> reg)
    : op_(std::move(op)), b_(std::move(b)), mu_(mu), reg_(std::move(reg)) {
    if (!op_ || !reg_) throw std::invalid_argument("objective needs an operator and a regularizer");
    if (!(mu_ > 0.0)) throw std::invalid_argument("mu must be positive");
    if (b_.size() != op_->rows()) throw std::invalid_argument("length of b must equal operator rows");
}

Evaluation evaluate(const CompositeObjective& obj, const Vector& x, Counters& counters) {
    if (x.size() != obj.dim()) throw std::invalid_argument("evaluate: x has the wrong length");
    Evaluation e;
    obj.op().apply_into(x, e.residual);
    e.residual -= obj.b();
    e.f = 0.5 * e.residual.squaredNorm();
    e.F = e.f + obj.mu() * obj.reg().value(x);
    ++counters.n_fun;
    return e;
}

Vector grad_f(const CompositeObjective& obj, const Vector& residual, Counters& counters) {
    if (residual.size() != obj.op().rows()) throw std::invalid_argument("grad_f: residual has the wrong length");
    ++counters.n_grad;
    return obj.op().apply_adjoint(residual);
}

Vector direction(const CompositeObjective& obj, const Vector& x, const Vector& gradient, double tau) {
    const Vector trial = x - tau * gradient;
    Vector p;
    obj.reg().prox(trial, obj.mu() * tau, p);
    return p - x;
}

double descent_measure(const CompositeObjective& obj, const Vector& x, const Vector& d, const Vector& gradient) {
    return d.dot(gradient) + obj.mu() * obj.reg().value_change(x, d);
}

}  // namespace smisga
