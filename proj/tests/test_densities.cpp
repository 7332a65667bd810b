#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "matvar/densities.hpp"
#include "matvar/quadrature.hpp"
#include "matvar/samplers.hpp"
#include "support/helpers.hpp"

using namespace matvar;
using Catch::Matchers::WithinAbs;
using cdouble = std::complex<double>;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("scalar gamma density reduces to the exponential") {
    const RealGammaParams params(1.0, SpdMatrix::identity(1));
    for (double x : {0.3, 1.0, 4.2})
        CHECK_THAT(log_density_gamma(params, SpdMatrix(1, {x})), WithinAbs(-x, 1e-14));
}

TEST_CASE("gamma density worked example at p=2") {
    const RealGammaParams params(2.0, SpdMatrix::identity(2));
    const double expected = -std::log(kPi / 2.0) - 2.0;
    CHECK_THAT(log_density_gamma(params, SpdMatrix::identity(2)), WithinAbs(expected, 1e-13));
}

TEST_CASE("complex gamma density uses the complex exponent and normalizer") {
    const ComplexGammaParams params(2.0, HpdMatrix::identity(2));
    // at X = I: (alpha - p) log det - tr = -2, constant -log cGamma_2(2) = -log pi
    CHECK_THAT(log_density_gamma(params, HpdMatrix::identity(2)),
               WithinAbs(-std::log(kPi) - 2.0, 1e-13));
}

TEST_CASE("gamma density normalizes at p=1 by quadrature") {
    for (double alpha : {1.0, 2.5}) {
        const RealGammaParams params(alpha, SpdMatrix(1, {1.3}));
        auto mass = integrate_adaptive(
            [&](double t) {
                if (t <= 0.0 || t >= 1.0) return 0.0;
                const double x = t / (1.0 - t);
                if (x > 700.0) return 0.0;
                return std::exp(log_density_gamma(params, SpdMatrix(1, {x}))) /
                       ((1.0 - t) * (1.0 - t));
            },
            0.0, 1.0, QuadratureOptions{1e-9, 4000, 0.2});
        CHECK_THAT(mass.value, WithinAbs(1.0, 1e-8));
    }
}

TEST_CASE("type-1 density is flat at alpha = beta = 1") {
    const MatrixBetaParams params(1, 1.0, 1.0, BetaKind::type1, Field::real);
    for (double x : {0.1, 0.5, 0.9})
        CHECK_THAT(log_density_beta(params, SpdMatrix(1, {x})), WithinAbs(0.0, 1e-14));
}

TEST_CASE("type-1 density worked example at p=2") {
    const MatrixBetaParams params(2, 2.0, 2.0, BetaKind::type1, Field::real);
    const SpdMatrix half(2, {0.5, 0.0, 0.0, 0.5});
    const double expected = -std::log(kPi / 45.0) + 0.5 * std::log(0.25) + 0.5 * std::log(0.25);
    CHECK_THAT(log_density_beta(params, half), WithinAbs(expected, 1e-13));
}

TEST_CASE("type-2 density worked example at p=1") {
    const MatrixBetaParams params(1, 2.0, 2.0, BetaKind::type2, Field::real);
    const double expected = -std::log(1.0 / 6.0) + std::log(1.0) - 4.0 * std::log(2.0);
    CHECK_THAT(log_density_beta(params, SpdMatrix(1, {1.0})), WithinAbs(expected, 1e-13));
}

TEST_CASE("beta densities normalize at p=1 by quadrature") {
    const QuadratureOptions opt{1e-9, 4000, 0.2};
    const MatrixBetaParams t1(1, 2.0, 3.0, BetaKind::type1, Field::real);
    auto mass1 = integrate_adaptive(
        [&](double x) {
            if (x <= 0.0 || x >= 1.0) return 0.0;
            return std::exp(log_density_beta(t1, SpdMatrix(1, {x})));
        },
        0.0, 1.0, opt);
    CHECK_THAT(mass1.value, WithinAbs(1.0, 1e-8));

    const MatrixBetaParams t2(1, 2.0, 3.0, BetaKind::type2, Field::real);
    auto mass2 = integrate_adaptive(
        [&](double t) {
            if (t <= 0.0 || t >= 1.0) return 0.0;
            const double x = t / (1.0 - t);
            return std::exp(log_density_beta(t2, SpdMatrix(1, {x}))) / ((1.0 - t) * (1.0 - t));
        },
        0.0, 1.0, opt);
    CHECK_THAT(mass2.value, WithinAbs(1.0, 1e-8));
}

TEST_CASE("type-1 symmetry: swapping parameters mirrors the argument") {
    RngStream rng(404, 0);
    const MatrixBetaParams ab(3, 2.5, 4.0, BetaKind::type1, Field::real);
    const MatrixBetaParams ba(3, 4.0, 2.5, BetaKind::type1, Field::real);
    for (int rep = 0; rep < 20; ++rep) {
        const auto x = sample_beta_real(ab, rng);
        const int p = x.dim();
        std::vector<double> mir(p * p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) mir[i * p + j] = (i == j ? 1.0 : 0.0) - x(i, j);
        CHECK_THAT(log_density_beta(ab, x),
                   WithinAbs(log_density_beta(ba, SpdMatrix(p, std::move(mir))), 1e-11));
    }
}

TEST_CASE("gamma density scale covariance under X -> cX") {
    RngStream rng(505, 0);
    const double c = 1.7;
    const int p = 2;
    const auto b = testing::random_spd(p, rng);
    std::vector<double> cb(b.entries());
    for (auto& v : cb) v *= c;
    const RealGammaParams base(3.0, b);
    const RealGammaParams scaled(3.0, SpdMatrix(p, std::move(cb)));
    for (int rep = 0; rep < 10; ++rep) {
        const auto y = testing::random_spd(p, rng);
        std::vector<double> cy(y.entries());
        for (auto& v : cy) v *= c;
        const double lhs = log_density_gamma(scaled, y);
        const double rhs = log_density_gamma(base, SpdMatrix(p, std::move(cy))) +
                           p * (p + 1) / 2.0 * std::log(c);
        CHECK_THAT(lhs, WithinAbs(rhs, 1e-11));
    }
}

TEST_CASE("real and complex type-1 coincide at p=1") {
    const MatrixBetaParams re(1, 2.0, 3.0, BetaKind::type1, Field::real);
    const MatrixBetaParams co(1, 2.0, 3.0, BetaKind::type1, Field::complex);
    for (double x : {0.2, 0.6, 0.9})
        CHECK(log_density_beta(re, SpdMatrix(1, {x})) ==
              log_density_beta(co, HpdMatrix(1, {cdouble(x, 0.0)})));
}

TEST_CASE("support violations raise, or return -inf on the unchecked path") {
    const MatrixBetaParams params(2, 2.0, 2.0, BetaKind::type1, Field::real);
    const SpdMatrix outside(2, {1.5, 0.0, 0.0, 0.5});  // X < I fails
    CHECK_THROWS_AS(log_density_beta(params, outside), DomainViolation);
    CHECK(std::isinf(log_density_beta(params, outside, false)));
    CHECK(log_density_beta(params, outside, false) < 0);
}

TEST_CASE("parameter validation rejects out-of-domain shapes") {
    CHECK_THROWS_AS(RealGammaParams(0.4, SpdMatrix::identity(2)), GammaDomainError);
    CHECK_THROWS_AS(MatrixBetaParams(3, 0.9, 2.0, BetaKind::type1, Field::real),
                    GammaDomainError);
    CHECK_THROWS_AS(MatrixBetaParams(2, 1.5, 2.0, BetaKind::type1, Field::complex),
                    GammaDomainError);
}

TEST_CASE("dimension mismatches are rejected") {
    const RealGammaParams params(3.0, SpdMatrix::identity(2));
    CHECK_THROWS_AS(log_density_gamma(params, SpdMatrix::identity(3)), InvalidMatrix);
}
