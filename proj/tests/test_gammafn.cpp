#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "matvar/gammafn.hpp"
#include "matvar/rng.hpp"
#include "matvar/verify.hpp"
#include "support/helpers.hpp"

using namespace matvar;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("multivariate gamma closed-form spot values") {
    CHECK_THAT(log_gamma_p(1, 2.5), WithinAbs(std::lgamma(2.5), 1e-13));
    // Gamma_2(3/2) = sqrt(pi) Gamma(3/2) Gamma(1) = pi/2
    CHECK_THAT(log_gamma_p(2, 1.5), WithinAbs(std::log(kPi / 2.0), 1e-13));
    CHECK_THAT(log_gamma_p_complex(1, 3.0), WithinAbs(std::log(2.0), 1e-13));
    // cGamma_2(2) = pi Gamma(2) Gamma(1) = pi
    CHECK_THAT(log_gamma_p_complex(2, 2.0), WithinAbs(std::log(kPi), 1e-13));
    // cGamma_3(4) = pi^3 Gamma(4) Gamma(3) Gamma(2) = 12 pi^3
    CHECK_THAT(log_gamma_p_complex(3, 4.0), WithinAbs(std::log(12.0 * kPi * kPi * kPi), 1e-13));
}

TEST_CASE("multivariate beta closed-form spot values") {
    CHECK_THAT(log_beta_p(1, 2.0, 3.0, Field::real), WithinAbs(std::log(1.0 / 12.0), 1e-13));
    // B_2(2,2) = Gamma_2(2)^2 / Gamma_2(4) = (pi/2)^2 / (45 pi / 4) = pi/45
    CHECK_THAT(log_beta_p(2, 2.0, 2.0, Field::real), WithinAbs(std::log(kPi / 45.0), 1e-13));
    CHECK_THAT(log_beta_p(2, 3.0, 3.0, Field::complex),
               WithinAbs(2.0 * log_gamma_p_complex(2, 3.0) - log_gamma_p_complex(2, 6.0), 1e-13));
}

TEST_CASE("p=3 value agrees with the independent triangular-coordinate oracle") {
    // the MC oracle never touches the closed form
    const auto est = mc_integral(Family::gamma_real, 3, 3.0, 0.0, 200000, 91, 0);
    CHECK(std::abs(est.log_value - log_gamma_p(3, 3.0)) <= 4.0 * est.std_error);
}

TEST_CASE("domain bounds are strict, no epsilon slack") {
    CHECK_THROWS_AS(log_gamma_p(3, 1.0), GammaDomainError);   // bound (p-1)/2 = 1 exactly
    CHECK_THROWS_AS(log_gamma_p_complex(3, 2.0), GammaDomainError);
    CHECK_THROWS_AS(log_beta_p(2, 0.5, 2.0, Field::real), GammaDomainError);
    CHECK_THROWS_AS(log_beta_p(2, 2.0, 0.5, Field::real), GammaDomainError);
    CHECK_NOTHROW(log_gamma_p(3, 1.0 + 1e-9));

    try {
        log_gamma_p(3, 0.5);
        FAIL("expected GammaDomainError");
    } catch (const GammaDomainError& e) {
        CHECK(e.required_bound == 1.0);
        CHECK(e.actual == 0.5);
        CHECK(e.field == Field::real);
    }
}

TEST_CASE("recursion in the dimension holds to 1e-12") {
    RngStream rng(2024, 0);
    for (int p = 2; p <= 8; ++p) {
        for (int rep = 0; rep < 20; ++rep) {
            const double a = testing::random_alpha(gamma_domain_bound(p, Field::real), rng);
            const double lhs = log_gamma_p(p, a);
            const double rhs = (p - 1) / 2.0 * std::log(kPi) + std::lgamma(a) +
                               log_gamma_p(p - 1, a - 0.5);
            CHECK_THAT(lhs, WithinAbs(rhs, 1e-12));
        }
    }
}

TEST_CASE("complex recursion holds to 1e-12") {
    RngStream rng(2025, 0);
    for (int p = 2; p <= 8; ++p) {
        for (int rep = 0; rep < 20; ++rep) {
            const double a = testing::random_alpha(gamma_domain_bound(p, Field::complex), rng);
            const double rhs = (p - 1) * std::log(kPi) + std::lgamma(a) +
                               log_gamma_p_complex(p - 1, a - 1.0);
            CHECK_THAT(log_gamma_p_complex(p, a), WithinAbs(rhs, 1e-12));
        }
    }
}

TEST_CASE("block identity and its mirror hold for every split") {
    RngStream rng(2026, 0);
    for (int p = 2; p <= 8; ++p) {
        for (int p1 = 1; p1 < p; ++p1) {
            const int p2 = p - p1;
            for (int rep = 0; rep < 20; ++rep) {
                const double a = testing::random_alpha(gamma_domain_bound(p, Field::real), rng);
                const double whole = log_gamma_p(p, a);
                const double split = p1 * p2 / 2.0 * std::log(kPi) + log_gamma_p(p1, a) +
                                     log_gamma_p(p2, a - p1 / 2.0);
                const double mirror = p1 * p2 / 2.0 * std::log(kPi) + log_gamma_p(p2, a) +
                                      log_gamma_p(p1, a - p2 / 2.0);
                CHECK_THAT(split, WithinAbs(whole, 1e-11));
                CHECK_THAT(mirror, WithinAbs(whole, 1e-11));
            }
        }
    }
}

TEST_CASE("beta is symmetric in its arguments") {
    RngStream rng(2027, 0);
    for (int p = 1; p <= 6; ++p)
        for (auto field : {Field::real, Field::complex}) {
            const double bound = gamma_domain_bound(p, field);
            const double a = testing::random_alpha(bound, rng);
            const double b = testing::random_alpha(bound, rng);
            CHECK_THAT(log_beta_p(p, a, b, field), WithinAbs(log_beta_p(p, b, a, field), 1e-13));
        }
}

TEST_CASE("linear-scale wrappers guard against overflow") {
    CHECK_THAT(gamma_p(2, 1.5), WithinAbs(kPi / 2.0, 1e-13));
    CHECK_THAT(beta_p(2, 2.0, 2.0, Field::real), WithinAbs(kPi / 45.0, 1e-14));
    CHECK_THROWS_AS(gamma_p(12, 120.0), OverflowError);
    CHECK_THROWS_AS(gamma_p(2, 5.0, 1.0), OverflowError);  // configurable ceiling
}
