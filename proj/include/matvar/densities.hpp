#pragma once

#include <cmath>
#include <limits>

#include "matvar/errors.hpp"
#include "matvar/gammafn.hpp"
#include "matvar/matrix.hpp"

namespace matvar {

// Densities are with respect to the wedge-product Lebesgue measure on the
// free entries of X (diagonal plus one triangle); some references use a
// different dominating measure, so this is stated here once.

template <class S>
struct MatrixGammaParams {
    int p;
    double alpha;
    PositiveDefiniteMatrix<S> scale;  // the B of the kernel exp(-tr(B X))

    MatrixGammaParams(double a, PositiveDefiniteMatrix<S> b)
        : p(b.dim()), alpha(a), scale(std::move(b)) {
        check_gamma_domain(p, alpha, scalar_traits<S>::field);
    }
};

using RealGammaParams = MatrixGammaParams<double>;
using ComplexGammaParams = MatrixGammaParams<std::complex<double>>;

enum class BetaKind { type1, type2 };

struct MatrixBetaParams {
    int p;
    double alpha;
    double beta;
    BetaKind kind;
    Field field;

    MatrixBetaParams(int dim, double a, double b, BetaKind k, Field f)
        : p(dim), alpha(a), beta(b), kind(k), field(f) {
        check_gamma_domain(p, alpha, field);
        check_gamma_domain(p, beta, field);
    }
};

// alpha log det B - log Gamma_p(alpha) + (alpha - h) log det X - tr(B X),
// h = (p+1)/2 real, h = p complex.
template <class S>
double log_density_gamma(const MatrixGammaParams<S>& params,
                         const PositiveDefiniteMatrix<S>& x) {
    constexpr Field field = scalar_traits<S>::field;
    if (x.dim() != params.p) throw InvalidMatrix("dimension mismatch");
    const double h = field == Field::real ? (params.p + 1) / 2.0 : params.p;
    return params.alpha * log_det(params.scale) -
           log_multivariate_gamma(params.p, params.alpha, field) +
           (params.alpha - h) * log_det(x) - trace_product(params.scale, x);
}

namespace detail {

// I - X (or I + X), revalidated; a failed validation is exactly the support
// violation the type-1 density must reject.
template <class S>
PositiveDefiniteMatrix<S> identity_plus_scaled(const PositiveDefiniteMatrix<S>& x, double sign,
                                               const char* what) {
    const int p = x.dim();
    std::vector<S> e(p * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            e[i * p + j] = (i == j ? S{1.0} : S{0.0}) + x(i, j) * sign;
    try {
        return PositiveDefiniteMatrix<S>(p, std::move(e));
    } catch (const NotPositiveDefinite&) {
        throw DomainViolation(what);
    }
}

}  // namespace detail

// Type-1: -log B_p + (alpha - h) log det X + (beta - h) log det(I - X), support O < X < I.
// Type-2: -log B_p + (alpha - h) log det X - (alpha+beta) log det(I + X), support X > O.
// With checked = false a support violation returns -infinity instead of
// throwing, for rejection-style callers.
template <class S>
double log_density_beta(const MatrixBetaParams& params, const PositiveDefiniteMatrix<S>& x,
                        bool checked = true) {
    constexpr Field field = scalar_traits<S>::field;
    if (field != params.field) throw InvalidMatrix("field mismatch between params and matrix");
    if (x.dim() != params.p) throw InvalidMatrix("dimension mismatch");
    const double h = field == Field::real ? (params.p + 1) / 2.0 : params.p;
    const double norm = log_beta_p(params.p, params.alpha, params.beta, field);
    if (params.kind == BetaKind::type1) {
        try {
            const auto complement = detail::identity_plus_scaled(x, -1.0, "type-1 support needs X < I");
            return -norm + (params.alpha - h) * log_det(x) +
                   (params.beta - h) * log_det(complement);
        } catch (const DomainViolation&) {
            if (!checked) return -std::numeric_limits<double>::infinity();
            throw;
        }
    }
    const auto grown = detail::identity_plus_scaled(x, 1.0, "I + X not positive definite");
    return -norm + (params.alpha - h) * log_det(x) -
           (params.alpha + params.beta) * log_det(grown);
}

}  // namespace matvar
