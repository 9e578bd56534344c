#include "smisga/operators.hpp"

#include "smisga/rng.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace smisga {

namespace {

// The FFTW planner and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

Matrix gaussian_matrix(Index m, Index n, Rng& rng) {
    Matrix a(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
    return a;
}

}  // namespace

namespace detail {

// Forward DCT-II (REDFT10) and its transpose DCT-III (REDFT01) of length n.
struct DctPlans {
    explicit DctPlans(Index n) : n(n) {
        std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard lock(fftw_planner_mutex());
        forward = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), FFTW_REDFT10, flags);
        backward = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), FFTW_REDFT01, flags);
        if (forward == nullptr || backward == nullptr) throw std::runtime_error("FFTW planning failed");
    }
    ~DctPlans() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    DctPlans(const DctPlans&) = delete;
    DctPlans& operator=(const DctPlans&) = delete;

    Index n;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

}  // namespace detail

std::string_view to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::gaussian: return "gaussian";
        case EnsembleKind::scaled_gaussian: return "scaled_gaussian";
        case EnsembleKind::orthogonalized_gaussian: return "orthogonalized_gaussian";
        case EnsembleKind::bernoulli: return "bernoulli";
        case EnsembleKind::partial_hadamard: return "partial_hadamard";
        case EnsembleKind::partial_dct: return "partial_dct";
        case EnsembleKind::dense: return "dense";
    }
    return "unknown";
}

EnsembleKind parse_ensemble(std::string_view name) {
    for (EnsembleKind k : kRandomEnsembles)
        if (to_string(k) == name) return k;
    if (name == "dense") return EnsembleKind::dense;
    throw std::invalid_argument("unknown ensemble: " + std::string(name));
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

void fwht(std::span<double> v) {
    const std::size_t n = v.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = v[j];
                const double b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

LinearOperator LinearOperator::from_dense(Matrix a, EnsembleKind kind) {
    require(a.rows() > 0 && a.cols() > 0, "operator dimensions must be positive");
    LinearOperator op;
    op.rows_ = a.rows();
    op.cols_ = a.cols();
    op.kind_ = kind;
    op.dense_ = std::move(a);
    return op;
}

LinearOperator LinearOperator::partial_transform(EnsembleKind kind, std::vector<Index> rows, Index n) {
    require(kind == EnsembleKind::partial_hadamard || kind == EnsembleKind::partial_dct,
            "partial_transform needs a Hadamard or DCT kind");
    require(is_power_of_two(n), "implicit transforms need n to be a power of two");
    require(!rows.empty(), "operator needs at least one row");
    require(static_cast<Index>(rows.size()) <= n, "more rows than columns");
    std::vector<Index> sorted = rows;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "selected rows must be distinct");
    require(sorted.front() >= 0 && sorted.back() < n, "selected row out of range");

    LinearOperator op;
    op.rows_ = static_cast<Index>(rows.size());
    op.cols_ = n;
    op.kind_ = kind;
    op.selected_ = std::move(rows);
    if (kind == EnsembleKind::partial_dct) op.dct_ = std::make_shared<const detail::DctPlans>(n);
    return op;
}

// Orthonormal full transform applied in place.
void LinearOperator::full_transform(Vector& v) const {
    const double n = static_cast<double>(cols_);
    if (kind_ == EnsembleKind::partial_hadamard) {
        fwht(std::span<double>(v.data(), static_cast<std::size_t>(v.size())));
        v *= 1.0 / std::sqrt(n);
        return;
    }
    // REDFT10: Y_k = 2 sum_j x_j cos(pi (2j+1) k / 2n); orthonormal scaling s_0 = sqrt(1/n), s_k = sqrt(2/n).
    Vector out(cols_);
    fftw_execute_r2r(dct_->forward, v.data(), out.data());
    out[0] *= 0.5 * std::sqrt(1.0 / n);
    out.tail(cols_ - 1) *= 0.5 * std::sqrt(2.0 / n);
    v = std::move(out);
}

void LinearOperator::full_transform_transpose(Vector& v) const {
    const double n = static_cast<double>(cols_);
    if (kind_ == EnsembleKind::partial_hadamard) {
        fwht(std::span<double>(v.data(), static_cast<std::size_t>(v.size())));
        v *= 1.0 / std::sqrt(n);
        return;
    }
    // REDFT01: Y_j = X_0 + 2 sum_{k>=1} X_k cos(pi (2j+1) k / 2n).
    v[0] *= std::sqrt(1.0 / n);
    v.tail(cols_ - 1) *= 0.5 * std::sqrt(2.0 / n);
    Vector out(cols_);
    fftw_execute_r2r(dct_->backward, v.data(), out.data());
    v = std::move(out);
}

void LinearOperator::apply_into(const Vector& x, Vector& out) const {
    if (x.size() != cols_) throw std::invalid_argument("apply: input length does not match operator columns");
    if (!is_implicit()) {
        out.noalias() = dense_ * x;
        return;
    }
    Vector full = x;
    full_transform(full);
    out.resize(rows_);
    for (Index i = 0; i < rows_; ++i) out[i] = full[selected_[static_cast<std::size_t>(i)]];
}

void LinearOperator::apply_adjoint_into(const Vector& y, Vector& out) const {
    if (y.size() != rows_) throw std::invalid_argument("apply_adjoint: input length does not match operator rows");
    if (!is_implicit()) {
        out.noalias() = dense_.transpose() * y;
        return;
    }
    Vector full = Vector::Zero(cols_);
    for (Index i = 0; i < rows_; ++i) full[selected_[static_cast<std::size_t>(i)]] = y[i];
    full_transform_transpose(full);
    out = std::move(full);
}

Vector LinearOperator::apply(const Vector& x) const {
    Vector out;
    apply_into(x, out);
    return out;
}

Vector LinearOperator::apply_adjoint(const Vector& y) const {
    Vector out;
    apply_adjoint_into(y, out);
    return out;
}

Matrix LinearOperator::materialize() const {
    if (!is_implicit()) return dense_;
    // Row i of A is A^T e_i.
    Matrix a(rows_, cols_);
    for (Index i = 0; i < rows_; ++i) {
        Vector e = Vector::Zero(rows_);
        e[i] = 1.0;
        a.row(i) = apply_adjoint(e).transpose();
    }
    return a;
}

double operator_norm_sq(const LinearOperator& op, int max_iters, double tol) {
    Rng rng(0x5EEDF00DULL);
    Vector v(op.cols());
    for (Index j = 0; j < v.size(); ++j) v[j] = rng.normal();
    v.normalize();

    Vector av, atav;
    double lambda = 0.0;
    for (int it = 0; it < std::max(max_iters, 1); ++it) {
        op.apply_into(v, av);
        const double rayleigh = av.squaredNorm();
        op.apply_adjoint_into(av, atav);
        const double norm = atav.norm();
        if (norm == 0.0 || !std::isfinite(norm)) return rayleigh;
        const bool done = it > 0 && std::abs(rayleigh - lambda) <= tol * rayleigh;
        lambda = rayleigh;
        if (done) break;
        v = atav / norm;
    }
    return lambda;
}

LinearOperator make_operator(const EnsembleSpec& spec) {
    require(spec.rows >= 1 && spec.cols >= 1, "operator dimensions must be positive");
    require(spec.rows <= spec.cols, "ensemble needs m <= n");
    Rng rng(spec.seed);
    const Index m = spec.rows;
    const Index n = spec.cols;

    switch (spec.kind) {
        case EnsembleKind::gaussian:
            return LinearOperator::from_dense(gaussian_matrix(m, n, rng), spec.kind);
        case EnsembleKind::scaled_gaussian: {
            Matrix a = gaussian_matrix(m, n, rng);
            const double norm_sq = operator_norm_sq(LinearOperator::from_dense(a), 2000, 1e-12);
            a /= std::sqrt(norm_sq);
            return LinearOperator::from_dense(std::move(a), spec.kind);
        }
        case EnsembleKind::orthogonalized_gaussian: {
            const Matrix g = gaussian_matrix(m, n, rng);
            Eigen::HouseholderQR<Matrix> qr(g.transpose());
            const Matrix q = qr.householderQ() * Matrix::Identity(n, m);
            return LinearOperator::from_dense(q.transpose(), spec.kind);
        }
        case EnsembleKind::bernoulli: {
            Matrix a(m, n);
            for (Index i = 0; i < m; ++i)
                for (Index j = 0; j < n; ++j) a(i, j) = rng.coin() ? 1.0 : -1.0;
            return LinearOperator::from_dense(std::move(a), spec.kind);
        }
        case EnsembleKind::partial_hadamard:
        case EnsembleKind::partial_dct: {
            require(is_power_of_two(n), "implicit transforms need n to be a power of two");
            const auto picked = rng.sample_indices(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
            std::vector<Index> rows(picked.begin(), picked.end());
            return LinearOperator::partial_transform(spec.kind, std::move(rows), n);
        }
        case EnsembleKind::dense:
            break;
    }
    throw std::invalid_argument("make_operator: dense kind has no random generator");
}

}  // namespace smisga
