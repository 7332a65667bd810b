#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "matvar/errors.hpp"

namespace matvar {

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr Field field = Field::real;
    static double conj(double x) { return x; }
    static double real(double x) { return x; }
    static double imag(double) { return 0.0; }
    static double abs(double x) { return std::abs(x); }
};

template <>
struct scalar_traits<std::complex<double>> {
    static constexpr Field field = Field::complex;
    static std::complex<double> conj(std::complex<double> x) { return std::conj(x); }
    static double real(std::complex<double> x) { return x.real(); }
    static double imag(std::complex<double> x) { return x.imag(); }
    static double abs(std::complex<double> x) { return std::abs(x); }
};

// Plain dense rectangular matrix, row-major, no invariants. Used for
// off-diagonal partition blocks and intermediate products.
template <class S>
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, S{}) {}
    DenseMatrix(int rows, int cols, std::vector<S> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (static_cast<int>(a_.size()) != rows_ * cols_)
            throw InvalidMatrix("entry count does not match dimensions");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    S& operator()(int i, int j) { return a_[i * cols_ + j]; }
    const S& operator()(int i, int j) const { return a_[i * cols_ + j]; }
    const std::vector<S>& entries() const { return a_; }

    DenseMatrix conj_transpose() const {
        DenseMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = scalar_traits<S>::conj((*this)(i, j));
        return t;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<S> a_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;

template <class S>
class LowerTriangularMatrix;

namespace detail {

// Lower Cholesky factor of a (symmetrized) positive-definite matrix stored in
// `a` row-major. Returns false if a pivot falls at or below
// rel_tol * max diagonal.
template <class S>
bool cholesky_in_place(int p, const std::vector<S>& a, std::vector<S>& lower, double rel_tol) {
    using T = scalar_traits<S>;
    double max_diag = 0.0;
    for (int j = 0; j < p; ++j) max_diag = std::max(max_diag, std::abs(T::real(a[j * p + j])));
    const double tol = rel_tol * std::max(max_diag, 1e-300);

    lower.assign(p * p, S{});
    for (int j = 0; j < p; ++j) {
        double d = T::real(a[j * p + j]);
        for (int k = 0; k < j; ++k) {
            const S ljk = lower[j * p + k];
            d -= T::real(ljk * T::conj(ljk));
        }
        if (!(d > tol)) return false;
        const double root = std::sqrt(d);
        lower[j * p + j] = S{root};
        for (int i = j + 1; i < p; ++i) {
            S s = a[i * p + j];
            for (int k = 0; k < j; ++k) s -= lower[i * p + k] * T::conj(lower[j * p + k]);
            lower[i * p + j] = s * (1.0 / root);
        }
    }
    return true;
}

}  // namespace detail

// Validated positive-definite matrix (symmetric for S = double, hermitian for
// S = complex). Construction symmetrizes the input to absorb round-off and
// proves definiteness by triangular factorization.
template <class S>
class PositiveDefiniteMatrix {
  public:
    static constexpr double kSymmetryTol = 1e-12;
    static constexpr double kPivotTol = 1e-12;

    PositiveDefiniteMatrix(int p, std::vector<S> entries) : p_(p), a_(std::move(entries)) {
        if (p_ <= 0) throw InvalidMatrix("dimension must be positive");
        if (static_cast<int>(a_.size()) != p_ * p_)
            throw InvalidMatrix("entry count does not match dimension");
        symmetrize_and_check();
        std::vector<S> lower;
        if (!detail::cholesky_in_place(p_, a_, lower, kPivotTol))
            throw NotPositiveDefinite("matrix is not positive definite");
    }

    static PositiveDefiniteMatrix identity(int p) {
        std::vector<S> e(p * p, S{});
        for (int j = 0; j < p; ++j) e[j * p + j] = S{1.0};
        return PositiveDefiniteMatrix(p, std::move(e));
    }

    int dim() const { return p_; }
    const S& operator()(int i, int j) const { return a_[i * p_ + j]; }
    const std::vector<S>& entries() const { return a_; }

    // max |a_ij - conj(a_ji)| / max |a_ij| seen before symmetrization.
    double symmetry_deviation() const { return asym_; }

    DenseMatrix<S> dense() const { return DenseMatrix<S>(p_, p_, a_); }

  private:
    void symmetrize_and_check() {
        using T = scalar_traits<S>;
        double max_abs = 0.0, max_dev = 0.0;
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j) {
                max_abs = std::max(max_abs, T::abs(a_[i * p_ + j]));
                max_dev = std::max(max_dev,
                                   T::abs(a_[i * p_ + j] - T::conj(a_[j * p_ + i])));
            }
        asym_ = max_abs > 0 ? max_dev / max_abs : 0.0;
        if (asym_ > kSymmetryTol)
            throw InvalidMatrix("matrix asymmetric: relative deviation " + std::to_string(asym_));
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j <= i; ++j) {
                const S avg = (a_[i * p_ + j] + T::conj(a_[j * p_ + i])) * 0.5;
                a_[i * p_ + j] = avg;
                a_[j * p_ + i] = T::conj(avg);
            }
        // hermitian diagonals are real by construction after averaging
        for (int j = 0; j < p_; ++j) a_[j * p_ + j] = S{T::real(a_[j * p_ + j])};
    }

    int p_ = 0;
    std::vector<S> a_;
    double asym_ = 0.0;
};

using SpdMatrix = PositiveDefiniteMatrix<double>;
using HpdMatrix = PositiveDefiniteMatrix<std::complex<double>>;

// Lower triangular factor with strictly positive (real) diagonal.
template <class S>
class LowerTriangularMatrix {
  public:
    LowerTriangularMatrix(int p, std::vector<S> entries) : p_(p), a_(std::move(entries)) {
        if (static_cast<int>(a_.size()) != p_ * p_)
            throw InvalidMatrix("entry count does not match dimension");
        using T = scalar_traits<S>;
        for (int i = 0; i < p_; ++i) {
            for (int j = i + 1; j < p_; ++j)
                if (T::abs(a_[i * p_ + j]) != 0.0)
                    throw InvalidMatrix("upper triangle must be zero");
            if (!(T::real(a_[i * p_ + i]) > 0.0) || T::imag(a_[i * p_ + i]) != 0.0)
                throw InvalidMatrix("diagonal must be real and strictly positive");
        }
    }

    int dim() const { return p_; }
    const S& operator()(int i, int j) const { return a_[i * p_ + j]; }
    double diag(int j) const { return scalar_traits<S>::real(a_[j * p_ + j]); }

    // T T' (or T T*), symmetrized, revalidated.
    PositiveDefiniteMatrix<S> reconstruct() const {
        using T = scalar_traits<S>;
        std::vector<S> x(p_ * p_, S{});
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < p_; ++j) {
                S s{};
                const int kmax = std::min(i, j);
                for (int k = 0; k <= kmax; ++k)
                    s += a_[i * p_ + k] * T::conj(a_[j * p_ + k]);
                x[i * p_ + j] = s;
            }
        return PositiveDefiniteMatrix<S>(p_, std::move(x));
    }

  private:
    int p_;
    std::vector<S> a_;
};

using LowerTriangular = LowerTriangularMatrix<double>;
using LowerTriangularComplex = LowerTriangularMatrix<std::complex<double>>;

template <class S>
LowerTriangularMatrix<S> cholesky(const PositiveDefiniteMatrix<S>& x) {
    std::vector<S> lower;
    if (!detail::cholesky_in_place(x.dim(), x.entries(), lower,
                                   PositiveDefiniteMatrix<S>::kPivotTol))
        throw NotPositiveDefinite("cholesky pivot below tolerance");
    return LowerTriangularMatrix<S>(x.dim(), std::move(lower));
}

// log det X = 2 sum_j log t_jj; for hermitian X this is log |det X|.
template <class S>
double log_det(const PositiveDefiniteMatrix<S>& x) {
    const auto t = cholesky(x);
    double acc = 0.0;
    for (int j = 0; j < x.dim(); ++j) acc += std::log(t.diag(j));
    return 2.0 * acc;
}

// Solve L W = B by forward substitution (L lower triangular, B p x m).
template <class S>
DenseMatrix<S> forward_solve(const LowerTriangularMatrix<S>& l, const DenseMatrix<S>& b) {
    const int p = l.dim(), m = b.cols();
    DenseMatrix<S> w(p, m);
    for (int c = 0; c < m; ++c)
        for (int i = 0; i < p; ++i) {
            S s = b(i, c);
            for (int k = 0; k < i; ++k) s -= l(i, k) * w(k, c);
            w(i, c) = s * (1.0 / l.diag(i));
        }
    return w;
}

// Solve L* V = B by back substitution.
template <class S>
DenseMatrix<S> adjoint_solve(const LowerTriangularMatrix<S>& l, const DenseMatrix<S>& b) {
    using T = scalar_traits<S>;
    const int p = l.dim(), m = b.cols();
    DenseMatrix<S> v(p, m);
    for (int c = 0; c < m; ++c)
        for (int i = p - 1; i >= 0; --i) {
            S s = b(i, c);
            for (int k = i + 1; k < p; ++k) s -= T::conj(l(k, i)) * v(k, c);
            v(i, c) = s * (1.0 / l.diag(i));
        }
    return v;
}

// Symmetric 2x2 block partition of a positive-definite matrix:
// X11 is p1 x p1, X22 is p2 x p2, X21 = X12' (or conjugate transpose).
template <class S>
struct Partition {
    int p1;
    int p2;
    PositiveDefiniteMatrix<S> x11;
    DenseMatrix<S> x12;
    DenseMatrix<S> x21;
    PositiveDefiniteMatrix<S> x22;
};

template <class S>
Partition<S> make_partition(const PositiveDefiniteMatrix<S>& x, int p1) {
    const int p = x.dim();
    if (p1 <= 0 || p1 >= p) throw InvalidMatrix("partition sizes must be positive");
    const int p2 = p - p1;
    std::vector<S> a11(p1 * p1), a22(p2 * p2);
    DenseMatrix<S> x12(p1, p2);
    for (int i = 0; i < p1; ++i)
        for (int j = 0; j < p1; ++j) a11[i * p1 + j] = x(i, j);
    for (int i = 0; i < p2; ++i)
        for (int j = 0; j < p2; ++j) a22[i * p2 + j] = x(p1 + i, p1 + j);
    for (int i = 0; i < p1; ++i)
        for (int j = 0; j < p2; ++j) x12(i, j) = x(i, p1 + j);
    DenseMatrix<S> x21 = x12.conj_transpose();
    return Partition<S>{p1, p2, PositiveDefiniteMatrix<S>(p1, std::move(a11)), std::move(x12),
                        std::move(x21), PositiveDefiniteMatrix<S>(p2, std::move(a22))};
}

enum class SchurPivot { on_x11, on_x22 };

// X22 - X21 X11^{-1} X12 (pivot on_x11), or X11 - X12 X22^{-1} X21 (on_x22).
// Positive definite whenever the parent is; realized through one triangular
// solve so the quadratic term is an exact Gram product.
template <class S>
PositiveDefiniteMatrix<S> schur_complement(const Partition<S>& part, SchurPivot pivot) {
    using T = scalar_traits<S>;
    const bool on11 = pivot == SchurPivot::on_x11;
    const auto& pivot_block = on11 ? part.x11 : part.x22;
    const auto& off = on11 ? part.x12 : part.x21;  // pivot-dim x result-dim
    const auto& rest = on11 ? part.x22 : part.x11;

    const auto l = cholesky(pivot_block);
    const auto w = forward_solve(l, off);  // pivot-dim x result-dim
    const int m = rest.dim();
    std::vector<S> r(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            S s = rest(i, j);
            for (int k = 0; k < pivot_block.dim(); ++k) s -= T::conj(w(k, i)) * w(k, j);
            r[i * m + j] = s;
        }
    return PositiveDefiniteMatrix<S>(m, std::move(r));
}

// log of the triangular-substitution Jacobian for X = T T' (real) or
// X = T T* (complex): 2^p prod t_jj^{p+1-j}, resp. 2^p prod t_jj^{2(p-j)+1}.
template <class S>
double triangular_jacobian_log(const LowerTriangularMatrix<S>& t) {
    const int p = t.dim();
    double acc = p * std::log(2.0);
    for (int j = 1; j <= p; ++j) {
        const double e = scalar_traits<S>::field == Field::real
                             ? static_cast<double>(p + 1 - j)
                             : static_cast<double>(2 * (p - j) + 1);
        acc += e * std::log(t.diag(j - 1));
    }
    return acc;
}

// tr(B X) accumulated entrywise without forming the product matrix; for
// hermitian inputs the imaginary parts cancel and the real part is returned.
template <class S>
double trace_product(const PositiveDefiniteMatrix<S>& b, const PositiveDefiniteMatrix<S>& x) {
    using T = scalar_traits<S>;
    if (b.dim() != x.dim()) throw InvalidMatrix("dimension mismatch in trace");
    const int p = b.dim();
    double acc = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) acc += T::real(b(i, j) * x(j, i));
    return acc;
}

}  // namespace matvar
