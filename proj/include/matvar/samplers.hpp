#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "matvar/densities.hpp"
#include "matvar/errors.hpp"
#include "matvar/gammafn.hpp"
#include "matvar/matrix.hpp"
#include "matvar/rng.hpp"
#include "matvar/stats.hpp"

namespace matvar {

// Bartlett-style triangular draw: squared diagonals are gamma variates with
// half-step (real) or whole-step (complex) descending shapes, off-diagonal
// components are Normal(0, 1/2) each. The 1/2 is forced by the kernel
// exp(-t^2) whose normalizer is sqrt(pi), not the unit-variance sqrt(2 pi) --
// the classic factor-of-two trap.
inline LowerTriangular sample_bartlett_real(int p, double alpha, RngStream& rng) {
    check_gamma_domain(p, alpha, Field::real);
    const double sigma = std::sqrt(0.5);
    std::vector<double> t(p * p, 0.0);
    for (int j = 0; j < p; ++j) {
        t[j * p + j] = std::sqrt(rng.gamma(alpha - j / 2.0));
        for (int k = 0; k < j; ++k) t[j * p + k] = rng.normal(sigma);
    }
    return LowerTriangular(p, std::move(t));
}

inline LowerTriangularComplex sample_bartlett_complex(int p, double alpha, RngStream& rng) {
    check_gamma_domain(p, alpha, Field::complex);
    const double sigma = std::sqrt(0.5);
    std::vector<std::complex<double>> t(p * p, 0.0);
    for (int j = 0; j < p; ++j) {
        t[j * p + j] = std::sqrt(rng.gamma(alpha - j));
        for (int k = 0; k < j; ++k)
            t[j * p + k] = std::complex<double>(rng.normal(sigma), rng.normal(sigma));
    }
    return LowerTriangularComplex(p, std::move(t));
}

// X = T T' (or T T*): matrix-variate gamma with unit scale, density
// log_density_gamma with B = I.
inline SpdMatrix sample_gamma_real(int p, double alpha, RngStream& rng) {
    return sample_bartlett_real(p, alpha, rng).reconstruct();
}

inline HpdMatrix sample_gamma_complex(int p, double alpha, RngStream& rng) {
    return sample_bartlett_complex(p, alpha, rng).reconstruct();
}

namespace detail {

template <class S>
PositiveDefiniteMatrix<S> add_matrices(const PositiveDefiniteMatrix<S>& a,
                                       const PositiveDefiniteMatrix<S>& b) {
    const int p = a.dim();
    std::vector<S> e(p * p);
    for (int i = 0; i < p * p; ++i) e[i] = a.entries()[i] + b.entries()[i];
    return PositiveDefiniteMatrix<S>(p, std::move(e));
}

// L^{-1} A L^{-*} as the Gram product (L^{-1} K)(L^{-1} K)* where A = K K*.
// A similarity-equivalent realization of M^{-1/2} A M^{-1/2} (M = L L*): the
// resulting distribution is the same, the product is positive definite by
// construction.
template <class S>
PositiveDefiniteMatrix<S> whiten(const PositiveDefiniteMatrix<S>& a,
                                 const LowerTriangularMatrix<S>& l) {
    using T = scalar_traits<S>;
    const int p = a.dim();
    const auto k = cholesky(a);
    DenseMatrix<S> kd(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) kd(i, j) = k(i, j);
    const auto v = forward_solve(l, kd);
    std::vector<S> u(p * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            S s{};
            for (int c = 0; c < p; ++c) s += v(i, c) * T::conj(v(j, c));
            u[i * p + j] = s;
        }
    return PositiveDefiniteMatrix<S>(p, std::move(u));
}

template <class S>
PositiveDefiniteMatrix<S> sample_beta_impl(const MatrixBetaParams& params, RngStream& rng) {
    constexpr Field field = scalar_traits<S>::field;
    const int p = params.p;
    PositiveDefiniteMatrix<S> a = [&] {
        if constexpr (field == Field::real)
            return sample_gamma_real(p, params.alpha, rng);
        else
            return sample_gamma_complex(p, params.alpha, rng);
    }();
    PositiveDefiniteMatrix<S> b = [&] {
        if constexpr (field == Field::real)
            return sample_gamma_real(p, params.beta, rng);
        else
            return sample_gamma_complex(p, params.beta, rng);
    }();
    if (params.kind == BetaKind::type2) return whiten(a, cholesky(b));
    const auto u = whiten(a, cholesky(add_matrices(a, b)));
    // support O < U < I; I - U = L^{-1} B L^{-*} so failure is pure round-off
    identity_plus_scaled(u, -1.0, "type-1 draw escaped O < U < I");
    return u;
}

}  // namespace detail

// Type-1: U = (A+B)^{-1/2} A (A+B)^{-1/2} with A ~ gamma(alpha), B ~ gamma(beta);
// type-2: V = B^{-1/2} A B^{-1/2}. Distributed per log_density_beta.
inline SpdMatrix sample_beta_real(const MatrixBetaParams& params, RngStream& rng) {
    if (params.field != Field::real) throw Error("params are not real-case");
    return detail::sample_beta_impl<double>(params, rng);
}

inline HpdMatrix sample_beta_complex(const MatrixBetaParams& params, RngStream& rng) {
    if (params.field != Field::complex) throw Error("params are not complex-case");
    return detail::sample_beta_impl<std::complex<double>>(params, rng);
}

struct EntryNormality {
    int row = 0;
    int col = 0;
    double ks_stat = 0.0;
    double ks_critical = 0.0;
    bool pass = false;
};

struct BlockGaussianReport {
    int p1 = 0;
    int p2 = 0;
    double alpha = 0.0;
    long long n_draws = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::vector<EntryNormality> entries;   // whitened off-diagonal block Y
    double corr_trace = 0.0;               // corr(tr X11, tr of the Schur block)
    double corr_logdet = 0.0;              // corr(log det X11, log det Schur block)
    double corr_threshold = 0.0;
    bool normality_pass = false;
    bool independence_pass = false;
    bool pass = false;
};

// Structure check on partitioned gamma draws: the whitened off-diagonal block
// Y = X21 X11^{-1/2} has iid Normal(0, 1/2) entries given X11, and the
// diagonal block X11 is independent of the Schur complement block. Both are
// tested at the given level against exact scalar oracles.
inline BlockGaussianReport conditional_block_gaussian_check(int p1, int p2, double alpha,
                                                            long long n_draws, RngStream& rng,
                                                            double level = 0.01) {
    const int p = p1 + p2;
    check_gamma_domain(p, alpha, Field::real);
    BlockGaussianReport report;
    report.p1 = p1;
    report.p2 = p2;
    report.alpha = alpha;
    report.n_draws = n_draws;
    report.seed = rng.seed();
    report.stream_id = rng.stream_id();

    std::vector<std::vector<double>> y_entries(p1 * p2);
    for (auto& v : y_entries) v.reserve(n_draws);
    std::vector<double> tr11, tr_schur, ld11, ld_schur;
    tr11.reserve(n_draws);
    tr_schur.reserve(n_draws);
    ld11.reserve(n_draws);
    ld_schur.reserve(n_draws);

    for (long long it = 0; it < n_draws; ++it) {
        const auto x = sample_gamma_real(p, alpha, rng);
        const auto part = make_partition(x, p1);
        const auto l11 = cholesky(part.x11);
        // Y' = L11^{-1} X12 so that tr(Y Y') = tr(X21 X11^{-1} X12)
        const auto yt = forward_solve(l11, part.x12);
        for (int i = 0; i < p2; ++i)
            for (int j = 0; j < p1; ++j) y_entries[i * p1 + j].push_back(yt(j, i));
        const auto schur = schur_complement(part, SchurPivot::on_x11);
        double t11 = 0.0, ts = 0.0;
        for (int i = 0; i < p1; ++i) t11 += part.x11(i, i);
        for (int i = 0; i < p2; ++i) ts += schur(i, i);
        tr11.push_back(t11);
        tr_schur.push_back(ts);
        ld11.push_back(log_det(part.x11));
        ld_schur.push_back(log_det(schur));
    }

    const double sigma = std::sqrt(0.5);
    const double crit = ks_critical(n_draws, level);
    report.normality_pass = true;
    for (int i = 0; i < p2; ++i)
        for (int j = 0; j < p1; ++j) {
            EntryNormality e;
            e.row = i;
            e.col = j;
            e.ks_stat = ks_statistic(y_entries[i * p1 + j],
                                     [&](double x) { return normal_cdf(x, sigma); });
            e.ks_critical = crit;
            e.pass = e.ks_stat < crit;
            report.normality_pass = report.normality_pass && e.pass;
            report.entries.push_back(e);
        }

    report.corr_trace = pearson_correlation(tr11, tr_schur);
    report.corr_logdet = pearson_correlation(ld11, ld_schur);
    report.corr_threshold = correlation_threshold(n_draws, level);
    report.independence_pass = std::abs(report.corr_trace) < report.corr_threshold &&
                               std::abs(report.corr_logdet) < report.corr_threshold;
    report.pass = report.normality_pass && report.independence_pass;
    return report;
}

}  // namespace matvar
