#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "matvar/matrix.hpp"
#include "matvar/rng.hpp"
#include "matvar/samplers.hpp"
#include "support/helpers.hpp"

using namespace matvar;
using Catch::Matchers::WithinAbs;
using cdouble = std::complex<double>;

TEST_CASE("cholesky of the identity is the identity") {
    for (int p : {1, 3, 5}) {
        const auto t = cholesky(SpdMatrix::identity(p));
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) CHECK(t(i, j) == (i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("cholesky worked example") {
    const SpdMatrix x(2, {4, 2, 2, 5});
    const auto t = cholesky(x);
    CHECK_THAT(t(0, 0), WithinAbs(2.0, 1e-14));
    CHECK_THAT(t(1, 0), WithinAbs(1.0, 1e-14));
    CHECK_THAT(t(1, 1), WithinAbs(2.0, 1e-14));
    // T T' reconstructs X
    const auto back = t.reconstruct();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK_THAT(back(i, j), WithinAbs(x(i, j), 1e-14));
}

TEST_CASE("hermitian cholesky worked example") {
    const HpdMatrix x(2, {cdouble(2, 0), cdouble(1, -1), cdouble(1, 1), cdouble(3, 0)});
    const auto t = cholesky(x);
    CHECK_THAT(t.diag(0), WithinAbs(std::sqrt(2.0), 1e-14));
    const auto back = t.reconstruct();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK_THAT(back(i, j).real(), WithinAbs(x(i, j).real(), 1e-13));
            CHECK_THAT(back(i, j).imag(), WithinAbs(x(i, j).imag(), 1e-13));
        }
}

TEST_CASE("reconstruction round-trips random matrices up to dim 8") {
    RngStream rng(5150, 0);
    for (int p = 1; p <= 8; ++p) {
        const auto x = testing::random_spd(p, rng);
        const auto back = cholesky(x).reconstruct();
        double scale = 0.0, dev = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                scale = std::max(scale, std::abs(x(i, j)));
                dev = std::max(dev, std::abs(back(i, j) - x(i, j)));
            }
        CHECK(dev / scale < 1e-10);

        const auto xc = testing::random_hpd(p, rng);
        const auto backc = cholesky(xc).reconstruct();
        double scalec = 0.0, devc = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                scalec = std::max(scalec, std::abs(xc(i, j)));
                devc = std::max(devc, std::abs(backc(i, j) - xc(i, j)));
            }
        CHECK(devc / scalec < 1e-10);
    }
}

TEST_CASE("validation rejects bad input") {
    CHECK_THROWS_AS(SpdMatrix(2, {1, 0.5, 0.4999, 1}), InvalidMatrix);  // asymmetric
    CHECK_THROWS_AS(SpdMatrix(2, {1, 2, 2, 1}), NotPositiveDefinite);   // indefinite
    CHECK_THROWS_AS(SpdMatrix(2, {1, 1, 1, 1}), NotPositiveDefinite);   // singular
    CHECK_THROWS_AS(SpdMatrix(2, {1, 2, 3}), InvalidMatrix);            // wrong count
    // hermitian with non-real diagonal
    CHECK_THROWS_AS(HpdMatrix(2, {cdouble(1, 0.1), cdouble(0, 0), cdouble(0, 0), cdouble(1, -0.1)}),
                    InvalidMatrix);
    // tiny asymmetry within tolerance is absorbed
    const SpdMatrix x(2, {1, 0.5 + 1e-14, 0.5, 1});
    CHECK(x(0, 1) == x(1, 0));
    CHECK(x.symmetry_deviation() <= 1e-12);
}

TEST_CASE("schur complement worked examples") {
    // block diagonal: complement is the untouched block
    const SpdMatrix bd(3, {2, 0.5, 0, 0.5, 2, 0, 0, 0, 7});
    const auto part_bd = make_partition(bd, 2);
    const auto s_bd = schur_complement(part_bd, SchurPivot::on_x11);
    CHECK_THAT(s_bd(0, 0), WithinAbs(7.0, 1e-14));

    const SpdMatrix x(2, {4, 2, 2, 5});
    const auto part = make_partition(x, 1);
    const auto s = schur_complement(part, SchurPivot::on_x11);
    CHECK_THAT(s(0, 0), WithinAbs(4.0, 1e-14));  // 5 - 2 * (1/4) * 2
    // det factorization: det(X11) * det(schur) = det(X) = 16
    CHECK_THAT(std::log(4.0) + std::log(4.0), WithinAbs(log_det(x), 1e-12));

    const auto s22 = schur_complement(part, SchurPivot::on_x22);
    CHECK_THAT(s22(0, 0), WithinAbs(4.0 - 2.0 * 2.0 / 5.0, 1e-14));
}

TEST_CASE("determinant consistency over random partitions") {
    RngStream rng(808, 0);
    for (int p = 2; p <= 8; ++p) {
        const auto x = testing::random_spd(p, rng);
        for (int p1 = 1; p1 < p; ++p1) {
            const auto part = make_partition(x, p1);
            const auto s = schur_complement(part, SchurPivot::on_x11);
            CHECK_THAT(log_det(part.x11) + log_det(s), WithinAbs(log_det(x), 1e-10));
        }
        const auto xc = testing::random_hpd(p, rng);
        const auto partc = make_partition(xc, p - 1);
        const auto sc = schur_complement(partc, SchurPivot::on_x11);
        CHECK_THAT(log_det(partc.x11) + log_det(sc), WithinAbs(log_det(xc), 1e-10));
    }
}

TEST_CASE("partition blocks satisfy the conjugate-transpose relation") {
    RngStream rng(909, 0);
    const auto x = testing::random_hpd(4, rng);
    const auto part = make_partition(x, 2);
    for (int i = 0; i < part.p1; ++i)
        for (int j = 0; j < part.p2; ++j)
            CHECK(part.x12(i, j) == std::conj(part.x21(j, i)));
}

TEST_CASE("hermitian forms are real") {
    RngStream rng(303, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const auto x = testing::random_hpd(4, rng);
        const auto part = make_partition(x, 3);
        // X21 X11^{-1} X21* via the Schur complement of the trailing scalar
        const auto s = schur_complement(part, SchurPivot::on_x11);
        const double quad = x(3, 3).real() - s(0, 0).real();
        CHECK(quad > 0.0);
        CHECK(std::abs(s(0, 0).imag()) < 1e-12);
    }
}

TEST_CASE("log_det worked examples") {
    CHECK_THAT(log_det(SpdMatrix::identity(4)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(log_det(SpdMatrix(2, {2, 0, 0, 3})), WithinAbs(std::log(6.0), 1e-14));
    CHECK_THAT(log_det(SpdMatrix(2, {4, 2, 2, 5})), WithinAbs(std::log(16.0), 1e-13));
}

TEST_CASE("triangular jacobian log factors") {
    CHECK_THAT(triangular_jacobian_log(LowerTriangular(1, {1.0})), WithinAbs(std::log(2.0), 1e-14));
    CHECK_THAT(triangular_jacobian_log(LowerTriangular(1, {3.0})), WithinAbs(std::log(6.0), 1e-14));
    // complex p=2 at unit diagonal: exponents vanish, 2^p remains
    const LowerTriangularComplex t2(2, {cdouble(1, 0), cdouble(0, 0), cdouble(0.3, -0.2),
                                        cdouble(1, 0)});
    CHECK_THAT(triangular_jacobian_log(t2), WithinAbs(std::log(4.0), 1e-14));
    // real p=2: exponents 2 and 1
    const LowerTriangular t3(2, {1.5, 0.0, 0.7, 2.0});
    CHECK_THAT(triangular_jacobian_log(t3),
               WithinAbs(2.0 * std::log(2.0) + 2.0 * std::log(1.5) + std::log(2.0), 1e-13));
    // finite, linear-scale strictly positive
    RngStream rng(21, 0);
    const auto t = sample_bartlett_real(5, 6.0, rng);
    CHECK(std::isfinite(triangular_jacobian_log(t)));
}

TEST_CASE("triangular type enforces its invariants") {
    CHECK_THROWS_AS(LowerTriangular(2, {1.0, 0.5, 0.0, 1.0}), InvalidMatrix);   // upper junk
    CHECK_THROWS_AS(LowerTriangular(2, {1.0, 0.0, 0.5, -1.0}), InvalidMatrix);  // bad diag
    CHECK_THROWS_AS(LowerTriangularComplex(1, {cdouble(1.0, 0.5)}), InvalidMatrix);
}
