#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "matvar/errors.hpp"
#include "matvar/gammafn.hpp"
#include "matvar/matrix.hpp"
#include "matvar/quadrature.hpp"
#include "matvar/reduction.hpp"
#include "matvar/rng.hpp"

namespace matvar {

struct McEstimate {
    double log_value = 0.0;
    double std_error = 0.0;  // delta-method standard error of the log estimate
    long long n_samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    double ess = 0.0;  // effective sample size of the importance weights
};

struct McOptions {
    int shards = 64;  // fixed shard plan; the merged estimate does not depend on workers
    int threads = 0;  // 0: MATVAR_THREADS env var, else hardware concurrency
    // proposal tail rules; there is no universal choice, so they are exposed
    double diag_shape_shift = 0.5;    // gamma proposals: integrand shape + shift
    double offdiag_inflation = 1.5;   // gamma proposals: variance inflation
    double beta_diag_relax = 0.75;    // beta proposals: scale on both Beta shapes
    double beta_offdiag_sigma = 0.35;
};

namespace detail {

inline int resolve_threads(int requested, int shards) {
    int t = requested;
    if (t <= 0) {
        if (const char* env = std::getenv("MATVAR_THREADS")) t = std::atoi(env);
    }
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    if (t <= 0) t = 1;
    return std::min(t, shards);
}

inline double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

struct ShardAccumulator {
    double max_log = -std::numeric_limits<double>::infinity();
    double s1 = 0.0;  // sum exp(lw - max_log)
    double s2 = 0.0;  // sum exp(2 (lw - max_log))
    long long n = 0;

    void add(double lw) {
        ++n;
        if (lw == -std::numeric_limits<double>::infinity()) return;
        if (lw > max_log) {
            const double r = std::exp(max_log - lw);
            s1 *= r;
            s2 *= r * r;
            max_log = lw;
        }
        const double e = std::exp(lw - max_log);
        s1 += e;
        s2 += e * e;
    }
};

// One importance-sampled draw in triangular coordinates; returns the log
// weight log f(T T') + log J(T) - log q(T). Proposals have strictly heavier
// tails than the integrand: gamma shapes are shifted up (polynomially heavier
// at the origin-facing side, subpolynomial ratio at infinity), Gaussian
// variances inflated, Beta shapes relaxed toward uniform.
template <Family family>
double mc_log_weight(int p, double alpha, double beta, const McOptions& opt, RngStream& rng) {
    constexpr bool complex_case =
        family == Family::gamma_complex || family == Family::beta1_complex;
    constexpr bool beta_family =
        family == Family::beta1_real || family == Family::beta1_complex;
    const double diag_step = complex_case ? 1.0 : 0.5;

    double log_q = 0.0, log_f = 0.0, log_jac = p * std::log(2.0);
    double trace = 0.0, sum_log_diag = 0.0;

    std::vector<double> tjj(p);
    for (int j = 0; j < p; ++j) {
        const double true_shape = alpha - j * diag_step;
        double d;
        if constexpr (beta_family) {
            const double a_sh = opt.beta_diag_relax * true_shape;
            const double b_sh = opt.beta_diag_relax * beta;
            const double x = rng.gamma(a_sh), y = rng.gamma(b_sh);
            d = x / (x + y);
            log_q += -log_beta_fn(a_sh, b_sh) + (a_sh - 1.0) * std::log(d) +
                     (b_sh - 1.0) * std::log1p(-d);
        } else {
            const double sh = true_shape + opt.diag_shape_shift;
            d = rng.gamma(sh);
            log_q += -std::lgamma(sh) + (sh - 1.0) * std::log(d) - d;
        }
        tjj[j] = std::sqrt(d);
        log_q += std::log(2.0 * tjj[j]);  // density transported from t^2 to t
        trace += d;
        sum_log_diag += std::log(tjj[j]);
        const int one_based = j + 1;
        log_jac += (complex_case ? 2.0 * (p - one_based) + 1.0
                                 : static_cast<double>(p + 1 - one_based)) *
                   std::log(tjj[j]);
    }

    const double off_sigma2 = beta_family ? opt.beta_offdiag_sigma * opt.beta_offdiag_sigma
                                          : 0.5 * opt.offdiag_inflation;
    const int comps = complex_case ? 2 : 1;
    const int n_off = p * (p - 1) / 2;
    std::vector<double> toff(static_cast<std::size_t>(n_off) * comps);
    for (auto& t : toff) {
        t = rng.normal(std::sqrt(off_sigma2));
        log_q += -0.5 * std::log(2.0 * std::numbers::pi * off_sigma2) -
                 t * t / (2.0 * off_sigma2);
        trace += t * t;
    }

    const double log_det_x = 2.0 * sum_log_diag;
    if constexpr (family == Family::gamma_real) {
        log_f = (alpha - (p + 1) / 2.0) * log_det_x - trace;
    } else if constexpr (family == Family::gamma_complex) {
        log_f = (alpha - p) * log_det_x - trace;
    } else {
        // type-1 beta: assemble X = T T' and test / factor I - X
        using S = std::conditional_t<complex_case, std::complex<double>, double>;
        std::vector<S> t(static_cast<std::size_t>(p) * p, S{});
        int k = 0;
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < i; ++j) {
                if constexpr (complex_case)
                    t[i * p + j] = S{toff[2 * k], toff[2 * k + 1]};
                else
                    t[i * p + j] = toff[k];
                ++k;
            }
            t[i * p + i] = S{tjj[i]};
        }
        std::vector<S> ix(static_cast<std::size_t>(p) * p, S{});
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= i; ++j) {
                S s{};
                for (int c = 0; c <= std::min(i, j); ++c)
                    s += t[i * p + c] * scalar_traits<S>::conj(t[j * p + c]);
                ix[i * p + j] = (i == j ? S{1.0} : S{0.0}) - s;
                ix[j * p + i] = scalar_traits<S>::conj(ix[i * p + j]);
            }
        std::vector<S> lower;
        if (!cholesky_in_place(p, ix, lower, 1e-14))
            return -std::numeric_limits<double>::infinity();  // outside O < X < I
        double log_det_ix = 0.0;
        for (int j = 0; j < p; ++j)
            log_det_ix += 2.0 * std::log(scalar_traits<S>::real(lower[j * p + j]));
        const double h = complex_case ? p : (p + 1) / 2.0;
        log_f = (alpha - h) * log_det_x + (beta - h) * log_det_ix;
    }
    return log_f + log_jac - log_q;
}

template <Family family>
McEstimate mc_integral_impl(int p, double alpha, double beta, long long n, std::uint64_t seed,
                            std::uint64_t stream_id, const McOptions& opt) {
    const int shards = std::max(1, opt.shards);
    const int threads = resolve_threads(opt.threads, shards);
    std::vector<ShardAccumulator> accs(shards);
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= shards) break;
            RngStream rng(seed, stream_id * static_cast<std::uint64_t>(shards) + i);
            const long long base = n / shards, extra = n % shards;
            const long long count = base + (i < extra ? 1 : 0);
            for (long long k = 0; k < count; ++k)
                accs[i].add(mc_log_weight<family>(p, alpha, beta, opt, rng));
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // merge shards in fixed order
    double max_log = -std::numeric_limits<double>::infinity();
    for (const auto& a : accs) max_log = std::max(max_log, a.max_log);
    double s1 = 0.0, s2 = 0.0;
    long long total = 0;
    for (const auto& a : accs) {
        if (a.s1 > 0.0) {
            const double r = std::exp(a.max_log - max_log);
            s1 += a.s1 * r;
            s2 += a.s2 * r * r;
        }
        total += a.n;
    }
    if (!(s1 > 0.0)) throw DegenerateWeights("all importance weights vanished");
    McEstimate est;
    est.n_samples = total;
    est.seed = seed;
    est.stream_id = stream_id;
    est.log_value = max_log + std::log(s1 / total);
    const double relvar = total * s2 / (s1 * s1) - 1.0;
    est.std_error = std::sqrt(std::max(relvar, 0.0) / (total - 1));
    est.ess = s1 * s1 / s2;
    if (est.ess < 0.01 * total)
        throw DegenerateWeights("effective sample size below 1% (" +
                                std::to_string(est.ess) + " of " + std::to_string(total) + ")");
    return est;
}

}  // namespace detail

// Importance-sampled estimate of the family's integral in triangular
// coordinates, log scale, with delta-method standard error. Sharded over
// deterministic sub-streams: stream k of the plan uses
// (seed, stream_id * shards + k), so the estimate is reproducible and
// independent of the worker count.
inline McEstimate mc_integral(Family family, int p, double alpha, double beta, long long n,
                              std::uint64_t seed, std::uint64_t stream_id = 0,
                              const McOptions& opt = {}) {
    if (p < 1 || p > 4) throw Error("mc_integral supports 1 <= p <= 4");
    if (n < 10000) throw Error("mc_integral needs n >= 10^4");
    const Field field = family_field(family);
    check_gamma_domain(p, alpha, field);
    switch (family) {
        case Family::gamma_real:
            return detail::mc_integral_impl<Family::gamma_real>(p, alpha, beta, n, seed,
                                                                stream_id, opt);
        case Family::gamma_complex:
            return detail::mc_integral_impl<Family::gamma_complex>(p, alpha, beta, n, seed,
                                                                   stream_id, opt);
        case Family::beta1_real:
            check_gamma_domain(p, beta, field);
            return detail::mc_integral_impl<Family::beta1_real>(p, alpha, beta, n, seed,
                                                                stream_id, opt);
        case Family::beta1_complex:
            check_gamma_domain(p, beta, field);
            return detail::mc_integral_impl<Family::beta1_complex>(p, alpha, beta, n, seed,
                                                                   stream_id, opt);
        case Family::beta2_real:
            // polynomial tails defeat the triangular proposal family; the
            // closed form coincides with beta1_real, which is covered
            throw Error("mc_integral does not support beta2_real; use quadrature or beta1");
    }
    throw Error("unknown family");
}

enum class OracleKind { quadrature, mc };

inline const char* to_string(OracleKind o) {
    return o == OracleKind::quadrature ? "quadrature" : "mc";
}

struct VerifyCheck {
    Family family = Family::gamma_real;
    int p = 1;
    double alpha = 1.0;
    double beta = std::numeric_limits<double>::quiet_NaN();
    OracleKind oracle = OracleKind::quadrature;
    long long n = 0;                // mc only
    std::uint64_t seed = 0;         // mc only
    std::uint64_t stream_id = 0;    // mc only
    double max_rel_error = 1e-4;    // quadrature pass bound
    double max_sigma = 4.0;         // mc pass bound, units of std_error
    double max_std_error = std::numeric_limits<double>::quiet_NaN();  // mc power bound
};

struct VerifyReport {
    VerifyCheck check;
    double closed_form_log = 0.0;
    double oracle_log = 0.0;
    double std_error = 0.0;
    double rel_error = 0.0;          // quadrature
    double discrepancy_sigma = 0.0;  // mc
    bool pass = false;
    std::string error;  // nonempty when the check itself failed to run
};

struct VerifyConfig {
    std::vector<VerifyCheck> checks;
    McOptions mc;
    QuadratureOptions quadrature;
};

inline double closed_form_log_value(Family family, int p, double alpha, double beta) {
    switch (family) {
        case Family::gamma_real: return log_gamma_p(p, alpha);
        case Family::gamma_complex: return log_gamma_p_complex(p, alpha);
        case Family::beta1_real:
        case Family::beta2_real: return log_beta_p(p, alpha, beta, Field::real);
        case Family::beta1_complex: return log_beta_p(p, alpha, beta, Field::complex);
    }
    throw Error("unknown family");
}

inline VerifyReport run_check(const VerifyCheck& check, const VerifyConfig& config) {
    VerifyReport report;
    report.check = check;
    try {
        const bool is_beta =
            check.family != Family::gamma_real && check.family != Family::gamma_complex;
        report.closed_form_log =
            closed_form_log_value(check.family, check.p, check.alpha, check.beta);
        if (check.oracle == OracleKind::quadrature) {
            const Field field = family_field(check.family);
            QuadratureValue q;
            if (is_beta) {
                if (check.family == Family::beta2_real)
                    throw Error("no quadrature for the type-2 kernel; closed form equals beta1");
                q = quadrature_beta1(check.p, check.alpha, check.beta, field,
                                     config.quadrature);
            } else {
                q = quadrature_gamma(check.p, check.alpha, field, config.quadrature);
            }
            report.oracle_log = q.log_value;
            report.rel_error = std::abs(std::expm1(q.log_value - report.closed_form_log));
            report.pass = report.rel_error <= check.max_rel_error;
        } else {
            const McEstimate est = mc_integral(check.family, check.p, check.alpha, check.beta,
                                               check.n, check.seed, check.stream_id, config.mc);
            report.oracle_log = est.log_value;
            report.std_error = est.std_error;
            report.discrepancy_sigma =
                std::abs(est.log_value - report.closed_form_log) / est.std_error;
            report.pass = report.discrepancy_sigma <= check.max_sigma;
            if (!std::isnan(check.max_std_error))
                report.pass = report.pass && est.std_error <= check.max_std_error;
        }
    } catch (const std::exception& e) {
        report.error = e.what();
        report.pass = false;
    }
    return report;
}

// Runs every check; per-item failures are recorded, not fatal.
inline std::vector<VerifyReport> run_suite(const VerifyConfig& config) {
    std::vector<VerifyReport> reports;
    reports.reserve(config.checks.size());
    for (const auto& check : config.checks) reports.push_back(run_check(check, config));
    return reports;
}

// Quadrature at p <= 2 and importance-sampled MC at p in {3, 4}, the standard
// verification grid.
inline VerifyConfig default_verify_config() {
    VerifyConfig cfg;
    auto quad = [&](Family f, int p, double a, double b) {
        VerifyCheck c;
        c.family = f;
        c.p = p;
        c.alpha = a;
        c.beta = b;
        c.oracle = OracleKind::quadrature;
        cfg.checks.push_back(c);
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();
    quad(Family::gamma_real, 1, 2.0, nan);
    quad(Family::gamma_real, 1, 3.7, nan);
    quad(Family::gamma_real, 2, 1.5, nan);
    quad(Family::gamma_real, 2, 3.25, nan);
    quad(Family::gamma_real, 2, 5.0, nan);
    quad(Family::beta1_real, 1, 2.0, 3.0);
    quad(Family::beta1_real, 1, 1.5, 2.5);
    quad(Family::beta1_real, 2, 2.0, 2.0);
    quad(Family::beta1_real, 2, 2.5, 3.5);
    quad(Family::beta1_real, 2, 4.0, 3.0);

    auto mc = [&](Family f, int p, double a, double b, std::uint64_t stream) {
        VerifyCheck c;
        c.family = f;
        c.p = p;
        c.alpha = a;
        c.beta = b;
        c.oracle = OracleKind::mc;
        c.n = 1000000;
        c.seed = 20250809;
        c.stream_id = stream;
        c.max_std_error = 0.02;
        cfg.checks.push_back(c);
    };
    mc(Family::gamma_real, 3, 3.0, nan, 1);
    mc(Family::gamma_real, 4, 3.0, nan, 2);
    mc(Family::gamma_complex, 3, 3.5, nan, 3);
    mc(Family::gamma_complex, 4, 4.0, nan, 4);
    mc(Family::beta1_real, 3, 3.0, 3.0, 5);
    return cfg;
}

}  // namespace matvar
