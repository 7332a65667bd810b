#pragma once

#include <cmath>
#include <numbers>

#include "matvar/errors.hpp"

namespace matvar {

// Convergence bound for the p-variate gamma integral: the argument must
// strictly exceed (p-1)/2 (real) or p-1 (complex). Strict, no epsilon slack:
// the integral diverges on the boundary.
inline double gamma_domain_bound(int p, Field field) {
    return field == Field::real ? (p - 1) / 2.0 : static_cast<double>(p - 1);
}

inline void check_gamma_domain(int p, double alpha, Field field) {
    const double bound = gamma_domain_bound(p, field);
    if (!(alpha > bound)) throw GammaDomainError(bound, alpha, field);
}

// log Gamma_p(alpha) = (p(p-1)/4) log pi + sum_{j=0}^{p-1} log Gamma(alpha - j/2).
inline double log_gamma_p(int p, double alpha) {
    check_gamma_domain(p, alpha, Field::real);
    double acc = p * (p - 1) / 4.0 * std::log(std::numbers::pi);
    for (int j = 0; j < p; ++j) acc += std::lgamma(alpha - j / 2.0);
    return acc;
}

// log Gamma~_p(alpha) = (p(p-1)/2) log pi + sum_{j=0}^{p-1} log Gamma(alpha - j).
inline double log_gamma_p_complex(int p, double alpha) {
    check_gamma_domain(p, alpha, Field::complex);
    double acc = p * (p - 1) / 2.0 * std::log(std::numbers::pi);
    for (int j = 0; j < p; ++j) acc += std::lgamma(alpha - static_cast<double>(j));
    return acc;
}

inline double log_multivariate_gamma(int p, double alpha, Field field) {
    return field == Field::real ? log_gamma_p(p, alpha) : log_gamma_p_complex(p, alpha);
}

// log B_p(alpha, beta) = log Gamma_p(alpha) + log Gamma_p(beta) - log Gamma_p(alpha+beta).
inline double log_beta_p(int p, double alpha, double beta, Field field) {
    return log_multivariate_gamma(p, alpha, field) + log_multivariate_gamma(p, beta, field) -
           log_multivariate_gamma(p, alpha + beta, field);
}

// Linear-scale wrappers. Everything internal stays in log scale; exponentiation
// is only offered up to a configurable ceiling.
inline constexpr double kDefaultMaxExpLog = 700.0;

inline double checked_exp(double log_value, double max_log) {
    if (log_value > max_log)
        throw OverflowError("linear-scale value exceeds exp(" + std::to_string(max_log) + ")");
    return std::exp(log_value);
}

inline double gamma_p(int p, double alpha, double max_log = kDefaultMaxExpLog) {
    return checked_exp(log_gamma_p(p, alpha), max_log);
}

inline double gamma_p_complex(int p, double alpha, double max_log = kDefaultMaxExpLog) {
    return checked_exp(log_gamma_p_complex(p, alpha), max_log);
}

inline double beta_p(int p, double alpha, double beta, Field field,
                     double max_log = kDefaultMaxExpLog) {
    return checked_exp(log_beta_p(p, alpha, beta, field), max_log);
}

}  // namespace matvar
