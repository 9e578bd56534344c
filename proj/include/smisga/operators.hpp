#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smisga {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Measurement-matrix families. `dense` is an explicit user-supplied matrix.
enum class EnsembleKind {
    gaussian,
    scaled_gaussian,
    orthogonalized_gaussian,
    bernoulli,
    partial_hadamard,
    partial_dct,
    dense,
};

/// The six randomized ensembles, in grid order.
inline constexpr EnsembleKind kRandomEnsembles[] = {
    EnsembleKind::gaussian,         EnsembleKind::scaled_gaussian,  EnsembleKind::orthogonalized_gaussian,
    EnsembleKind::bernoulli,        EnsembleKind::partial_hadamard, EnsembleKind::partial_dct,
};

std::string_view to_string(EnsembleKind kind);
/// Throws std::invalid_argument on an unknown name.
EnsembleKind parse_ensemble(std::string_view name);

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::gaussian;
    Index rows = 1;
    Index cols = 1;
    std::uint64_t seed = 0;
};

bool is_power_of_two(Index n);

namespace detail {
struct DctPlans;
}

/// m x n measurement operator with forward and adjoint application.
///
/// Dense kinds hold the matrix; partial Hadamard / DCT hold the selected row
/// indices and apply the full orthonormal transform implicitly:
/// Hadamard by an in-place fast Walsh-Hadamard transform, DCT-II through FFTW
/// (both O(n log n)). Immutable after construction, so one instance can be
/// shared across threads.
class LinearOperator {
public:
    static LinearOperator from_dense(Matrix a, EnsembleKind kind = EnsembleKind::dense);
    /// Row subset of the n x n orthonormal transform. `rows` must be distinct and < n;
    /// n must be a power of two.
    static LinearOperator partial_transform(EnsembleKind kind, std::vector<Index> rows, Index n);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    EnsembleKind kind() const { return kind_; }
    bool is_implicit() const { return kind_ == EnsembleKind::partial_hadamard || kind_ == EnsembleKind::partial_dct; }

    /// y = A x. Throws std::invalid_argument on a length mismatch.
    Vector apply(const Vector& x) const;
    /// x = A^T y. Throws std::invalid_argument on a length mismatch.
    Vector apply_adjoint(const Vector& y) const;

    void apply_into(const Vector& x, Vector& out) const;
    void apply_adjoint_into(const Vector& y, Vector& out) const;

    /// Explicit m x n matrix. For implicit kinds this costs m transforms.
    Matrix materialize() const;

    /// Selected transform rows (empty for dense kinds).
    std::span<const Index> selected_rows() const { return selected_; }
    /// Stored matrix for dense kinds; empty otherwise.
    const Matrix& dense_matrix() const { return dense_; }

private:
    LinearOperator() = default;

    void full_transform(Vector& v) const;
    void full_transform_transpose(Vector& v) const;

    Index rows_ = 0;
    Index cols_ = 0;
    EnsembleKind kind_ = EnsembleKind::dense;
    Matrix dense_;
    std::vector<Index> selected_;
    std::shared_ptr<const detail::DctPlans> dct_;
};

/// Builds the operator for `spec`; a deterministic function of the spec.
/// Throws std::invalid_argument for m > n, non-positive sizes, or a
/// non-power-of-two n for implicit kinds.
LinearOperator make_operator(const EnsembleSpec& spec);

/// In-place unnormalized Sylvester-ordered Walsh-Hadamard transform.
void fwht(std::span<double> v);

/// Largest eigenvalue of A^T A by power iteration, stopping when the
/// Rayleigh quotient changes by less than `tol` relative or after `max_iters`.
/// A zero operator gives 0. The start vector is fixed, so the result is
/// deterministic.
double operator_norm_sq(const LinearOperator& op, int max_iters = 1000, double tol = 1e-10);

}  // namespace smisga
