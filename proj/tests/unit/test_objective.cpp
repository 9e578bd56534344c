#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace smisga;
using test::dense_objective;
using test::random_vector;

namespace {

// argmin over a grid of spacing h of theta |y| + 0.5 (x - y)^2, refined
// around the coarse winner.
double grid_minimizer(double x, double theta) {
    auto phi = [&](double y) { return theta * std::abs(y) + 0.5 * (x - y) * (x - y); };
    const double lo = -std::abs(x) - 1.0, hi = std::abs(x) + 1.0;
    double best = lo, best_val = phi(lo);
    for (double h : {1e-3, 1e-6}) {
        const double a = h == 1e-3 ? lo : best - 2e-3, b = h == 1e-3 ? hi : best + 2e-3;
        const long steps = std::lround((b - a) / h);
        for (long i = 0; i <= steps; ++i) {
            const double y = a + static_cast<double>(i) * h;
            const double v = phi(y);
            if (v < best_val) best_val = v, best = y;
        }
        // the kink at 0 is a candidate the grid may step over
        if (phi(0.0) <= best_val) best_val = phi(0.0), best = 0.0;
    }
    return best;
}

}  // namespace

TEST_CASE("evaluate arithmetic and counting") {
    Counters c;
    const auto zero = dense_objective(Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
    CHECK(evaluate(zero, Vector::Zero(2), c).F == 0.0);

    const Evaluation e = evaluate(zero, Vector{{1.0, 0.0}}, c);
    CHECK(e.f == doctest::Approx(0.5));
    CHECK(e.F == doctest::Approx(1.5));
    CHECK(e.residual == Vector{{1.0, 0.0}});

    const auto scalar = test::scalar_objective();
    CHECK(evaluate(scalar, Vector::Constant(1, 0.75), c).F == doctest::Approx(0.21875));
    CHECK(c.n_fun == 3);
    CHECK(c.n_grad == 0);
    CHECK_THROWS_AS(evaluate(scalar, Vector::Zero(2), c), std::invalid_argument);
}

TEST_CASE("objective construction validates inputs") {
    auto op = std::make_shared<const LinearOperator>(LinearOperator::from_dense(Matrix::Identity(2, 2)));
    CHECK_THROWS_AS(CompositeObjective(op, Vector::Zero(2), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CompositeObjective(op, Vector::Zero(3), 1.0), std::invalid_argument);
}

TEST_CASE("gradient matches central differences") {
    Counters c;
    const auto id = dense_objective(Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
    CHECK(grad_f(id, Vector::Zero(2), c) == Vector::Zero(2));
    CHECK(grad_f(id, evaluate(id, Vector{{1.0, 0.0}}, c).residual, c) == Vector{{1.0, 0.0}});
    CHECK(c.n_grad == 2);

    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
        const auto obj = dense_objective(test::random_matrix(rng, 5, 8), random_vector(rng, 5), 0.1);
        const Vector x = random_vector(rng, 8);
        const Vector g = grad_f(obj, evaluate(obj, x, c).residual, c);
        Vector fd(8);
        for (Index i = 0; i < 8; ++i) {
            const double h = 1e-6 * (1.0 + std::abs(x[i]));
            Vector xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            fd[i] = (evaluate(obj, xp, c).f - evaluate(obj, xm, c).f) / (2 * h);
        }
        CHECK((g - fd).norm() <= 1e-5 * g.norm());
    }
}

TEST_CASE("shrinkage closed form and grid oracle") {
    const Vector x{{2.0, -0.3, 0.5}};
    CHECK(shrinkage(x, 0.0) == x);
    CHECK(shrinkage(x, 0.5) == Vector{{1.5, 0.0, 0.0}});

    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        const Vector v = random_vector(rng, 4, 2.0);
        const double theta = 1.5 * rng.uniform();
        const Vector p = shrinkage(v, theta);
        for (Index i = 0; i < 4; ++i) CHECK(std::abs(p[i] - grid_minimizer(v[i], theta)) <= 1e-6);
    }
}

TEST_CASE("l1 norm is convex and its prox is shrinkage") {
    L1Norm c;
    Rng rng(41);
    for (int t = 0; t < 100; ++t) {
        const Vector x = random_vector(rng, 10), y = random_vector(rng, 10);
        CHECK(c.value(0.5 * x + 0.5 * y) <= 0.5 * c.value(x) + 0.5 * c.value(y) + 1e-12);
        Vector out;
        c.prox(x, 0.3, out);
        CHECK(out == shrinkage(x, 0.3));
        const Vector d = random_vector(rng, 10);
        CHECK(c.value_change(x, d) == doctest::Approx(c.value(x + d) - c.value(x)).epsilon(1e-12));
    }
}

TEST_CASE("prox properties for random triples") {
    L1Norm c;
    Rng rng(51);
    for (int t = 0; t < 1000; ++t) {
        const Vector x = random_vector(rng, 12, 3.0), y = random_vector(rng, 12, 3.0);
        const double theta = 2.0 * rng.uniform();
        const double scale = 1.0 + x.norm() + y.norm();
        const Vector px = shrinkage(x, theta), py = shrinkage(y, theta);
        // variational inequality against any y with zeta = c(y)
        CHECK((px - x).dot(y - px) + theta * (c.value(y) - c.value(px)) >= -1e-10 * scale);
        CHECK((px - py).dot(x - y) >= (px - py).squaredNorm() - 1e-10 * scale);
        CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
    }
}

TEST_CASE("direction examples") {
    const auto scalar = test::scalar_objective();
    Counters c;
    const Vector xs = Vector::Constant(1, 0.75);
    const Vector g = grad_f(scalar, evaluate(scalar, xs, c).residual, c);
    CHECK(g[0] == doctest::Approx(-0.25));
    CHECK(direction(scalar, xs, g, 1.0).norm() <= 1e-15);

    const auto id = dense_objective(Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
    const Vector x{{1.0, 0.0}};
    const Vector gx = grad_f(id, evaluate(id, x, c).residual, c);
    const Vector d = direction(id, x, gx, 1.0);
    CHECK(d == Vector{{-1.0, 0.0}});
    CHECK(descent_measure(id, x, d, gx) == doctest::Approx(-2.0));
    CHECK(descent_measure(id, x, Vector::Zero(2), gx) == 0.0);

    const Vector zero = Vector::Zero(2);
    CHECK(direction(id, zero, grad_f(id, evaluate(id, zero, c).residual, c), 1.0) == zero);
}

TEST_CASE("descent bound and ratio bound on random instances") {
    const double tau_min = 1e-4, tau_max = 1e4;
    Rng rng(61);
    Counters c;
    for (int t = 0; t < 100; ++t) {
        const auto obj = dense_objective(test::random_matrix(rng, 6, 10), random_vector(rng, 6), 0.05 + rng.uniform());
        const Vector x = random_vector(rng, 10);
        const double tau = std::exp(std::log(tau_min) + rng.uniform() * (std::log(tau_max) - std::log(tau_min)));
        const Vector g = grad_f(obj, evaluate(obj, x, c).residual, c);
        const Vector d = direction(obj, x, g, tau);
        const double delta = descent_measure(obj, x, d, g);
        const double d2 = d.squaredNorm();
        CAPTURE(tau);
        CHECK(delta <= -d2 / (2 * tau));
        if (d2 > 0) CHECK(d2 * d2 / (delta * delta) <= 4 * tau_max * tau_max);
        else CHECK(delta == 0.0);
    }
}
