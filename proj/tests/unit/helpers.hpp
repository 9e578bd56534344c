#pragma once

#include "smisga/objective.hpp"
#include "smisga/operators.hpp"
#include "smisga/rng.hpp"

#include <memory>

namespace test {

using smisga::Index;
using smisga::Matrix;
using smisga::Vector;

inline Vector random_vector(smisga::Rng& rng, Index n, double scale = 1.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
    return v;
}

inline Matrix random_matrix(smisga::Rng& rng, Index m, Index n) {
    Matrix a(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) a(i, j) = rng.normal();
    return a;
}

inline smisga::CompositeObjective dense_objective(Matrix a, Vector b, double mu) {
    auto op = std::make_shared<const smisga::LinearOperator>(smisga::LinearOperator::from_dense(std::move(a)));
    return smisga::CompositeObjective(op, std::move(b), mu);
}

/// 1-D instance A = [1], b = [1], mu = 0.25 with minimizer 0.75.
inline smisga::CompositeObjective scalar_objective() {
    return dense_objective(Matrix::Ones(1, 1), Vector::Ones(1), 0.25);
}

}  // namespace test
