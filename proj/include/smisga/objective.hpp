#pragma once

#include "smisga/operators.hpp"

#include <memory>

namespace smisga {

/// Convex regularizer c(x): value and proximal map.
class Regularizer {
public:
    virtual ~Regularizer() = default;

    /// c(x) >= 0.
    virtual double value(const Vector& x) const = 0;

    /// argmin_y theta * c(y) + 0.5 * ||x - y||^2, written into `out`.
    virtual void prox(const Vector& x, double theta, Vector& out) const = 0;

    /// c(x + d) - c(x). Implementations may override with a form that does
    /// not lose the difference to cancellation when ||d|| << ||x||.
    virtual double value_change(const Vector& x, const Vector& d) const;
};

/// c(x) = ||x||_1, prox = shrinkage.
class L1Norm final : public Regularizer {
public:
    double value(const Vector& x) const override;
    void prox(const Vector& x, double theta, Vector& out) const override;
    double value_change(const Vector& x, const Vector& d) const override;
};

/// Soft threshold sign(x_i) * max(|x_i| - theta, 0). theta >= 0.
Vector shrinkage(const Vector& x, double theta);
void shrinkage_into(const Vector& x, double theta, Vector& out);

/// Per-solve evaluation counters. Owned by one solve; never shared.
struct Counters {
    long n_fun = 0;
    long n_grad = 0;
};

/// F(x) = 0.5 ||A x - b||^2 + mu * c(x).
class CompositeObjective {
public:
    /// Throws std::invalid_argument if mu <= 0 or b does not match op.rows().
    CompositeObjective(std::shared_ptr<const LinearOperator> op, Vector b, double mu,
                       std::shared_ptr<const Regularizer> reg = std::make_shared<L1Norm>());

    const LinearOperator& op() const { return *op_; }
    std::shared_ptr<const LinearOperator> op_ptr() const { return op_; }
    const Vector& b() const { return b_; }
    double mu() const { return mu_; }
    const Regularizer& reg() const { return *reg_; }
    Index dim() const { return op_->cols(); }

private:
    std::shared_ptr<const LinearOperator> op_;
    Vector b_;
    double mu_;
    std::shared_ptr<const Regularizer> reg_;
};

struct Evaluation {
    double F = 0.0;
    double f = 0.0;
    Vector residual;  // A x - b
};

/// One objective evaluation; increments counters.n_fun.
Evaluation evaluate(const CompositeObjective& obj, const Vector& x, Counters& counters);

/// grad f = A^T residual; increments counters.n_grad.
Vector grad_f(const CompositeObjective& obj, const Vector& residual, Counters& counters);

/// d = prox(x - tau * gradient, mu * tau) - x.
Vector direction(const CompositeObjective& obj, const Vector& x, const Vector& gradient, double tau);

/// Delta = d^T gradient + mu * (c(x + d) - c(x)). Nonpositive for the
/// proximal direction and zero exactly when d = 0.
double descent_measure(const CompositeObjective& obj, const Vector& x, const Vector& d, const Vector& gradient);

}  // namespace smisga
