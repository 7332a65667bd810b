#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "matvar/errors.hpp"
#include "matvar/gammafn.hpp"

namespace matvar {

struct QuadratureOptions {
    double rtol = 1e-6;            // refinement target on each level's estimate
    int max_intervals = 4000;      // per level
    // nested levels run tighter by this factor per depth
    double inner_tightening = 0.2;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1].
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b, long long& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    ++evals;
    double resk = kKronrodW[7] * fc, resg = kGaussW[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kGkNodes[j];
        const double f1 = f(c - x), f2 = f(c + x);
        evals += 2;
        resk += kKronrodW[j] * (f1 + f2);
        if (j % 2 == 1) resg += kGaussW[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs(resk - resg) * h};
}

struct Interval {
    double err, a, b, value;
    bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace detail

struct IntegralEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    long long evals = 0;
};

// Globally adaptive Gauss-Kronrod: bisect the worst interval until the summed
// error estimate meets the tolerance or the interval budget runs out.
template <class F>
IntegralEstimate integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt,
                                    double atol = 0.0) {
    long long evals = 0;
    auto [v, e] = detail::gk15(f, a, b, evals);
    std::priority_queue<detail::Interval> heap;
    heap.push({e, a, b, v});
    double total_v = v, total_e = e;
    int n_intervals = 1;
    while (total_e > std::max(atol, opt.rtol * std::abs(total_v)) &&
           n_intervals < opt.max_intervals) {
        const auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        auto [v1, e1] = detail::gk15(f, worst.a, m, evals);
        auto [v2, e2] = detail::gk15(f, m, worst.b, evals);
        total_v += v1 + v2 - worst.value;
        total_e += e1 + e2 - worst.err;
        heap.push({e1, worst.a, m, v1});
        heap.push({e2, m, worst.b, v2});
        ++n_intervals;
    }
    if (total_e > std::max(atol, opt.rtol * std::abs(total_v)) * 16.0)
        throw QuadratureNonConvergence("adaptive refinement stalled above tolerance");
    return {total_v, total_e, evals};
}

namespace detail {

// x = a + (b-a)(3 s^2 - 2 s^3) on s in (0,1): the vanishing endpoint Jacobian
// tames algebraic endpoint singularities of the integrand.
template <class F>
auto smoothstep(F f, double a, double b) {
    const double len = b - a;
    return [f, a, len](double s) {
        return f(a + len * (3.0 - 2.0 * s) * s * s) * len * 6.0 * s * (1.0 - s);
    };
}

// x = t / (1 - t) maps (0, infinity) onto (0, 1).
template <class F>
auto half_line(F f) {
    return [f](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        const double om = 1.0 - t;
        return f(t / om) / (om * om);
    };
}

}  // namespace detail

struct QuadratureValue {
    double log_value = 0.0;
    double rel_error = 0.0;  // reported error estimate relative to the value
    long long evals = 0;
};

// Direct numerical evaluation of the gamma integral in the original matrix
// coordinates (free entries of X), p <= 2. The only use of the closed form is
// by the caller comparing against it.
inline QuadratureValue quadrature_gamma(int p, double alpha, Field field = Field::real,
                                        QuadratureOptions opt = {}) {
    check_gamma_domain(p, alpha, field);
    if (p > 2) throw Error("deterministic quadrature is limited to p <= 2");
    const double diag_cut = 1400.0;  // exp(-x) underflows; avoids inf * 0 overflow at the map edge

    IntegralEstimate est;
    if (p == 1) {
        est = integrate_adaptive(
            detail::half_line([&](double x) {
                return x > diag_cut ? 0.0 : std::pow(x, alpha - 1.0) * std::exp(-x);
            }),
            0.0, 1.0, opt);
    } else if (field == Field::real) {
        QuadratureOptions mid = opt, inner = opt;
        mid.rtol *= opt.inner_tightening;
        inner.rtol *= opt.inner_tightening * opt.inner_tightening;
        const double expo = alpha - 1.5;
        long long evals = 0;
        auto outer = [&](double x11) {
            auto middle = [&](double x22) {
                if (x11 + x22 > diag_cut) return 0.0;
                const double r = std::sqrt(x11 * x22), damp = std::exp(-x11 - x22);
                auto in = integrate_adaptive(
                    detail::smoothstep(
                        [&](double x12) {
                            const double d = x11 * x22 - x12 * x12;
                            return d <= 0.0 ? 0.0 : std::pow(d, expo) * damp;
                        },
                        -r, r),
                    0.0, 1.0, inner);
                evals += in.evals;
                return in.value;
            };
            auto m = integrate_adaptive(detail::half_line(middle), 0.0, 1.0, mid);
            evals += m.evals;
            return m.value;
        };
        est = integrate_adaptive(detail::half_line(outer), 0.0, 1.0, opt);
        est.evals += evals;
    } else {
        // hermitian p = 2: one complex off-diagonal entry, disc-shaped domain
        QuadratureOptions l2 = opt, l3 = opt, l4 = opt;
        l2.rtol *= opt.inner_tightening;
        l3.rtol *= opt.inner_tightening * opt.inner_tightening;
        l4.rtol *= opt.inner_tightening * opt.inner_tightening * opt.inner_tightening;
        const double expo = alpha - 2.0;
        long long evals = 0;
        auto outer = [&](double x11) {
            auto lvl2 = [&](double x22) {
                if (x11 + x22 > diag_cut) return 0.0;
                const double r2 = x11 * x22, damp = std::exp(-x11 - x22);
                const double r = std::sqrt(r2);
                auto lvl3 = [&](double u) {
                    const double s2 = r2 - u * u;
                    if (s2 <= 0.0) return 0.0;
                    const double s = std::sqrt(s2);
                    auto in = integrate_adaptive(
                        detail::smoothstep(
                            [&](double v) {
                                const double d = s2 - v * v;
                                return d <= 0.0 ? 0.0 : std::pow(d, expo) * damp;
                            },
                            -s, s),
                        0.0, 1.0, l4);
                    evals += in.evals;
                    return in.value;
                };
                auto m3 = integrate_adaptive(detail::smoothstep(lvl3, -r, r), 0.0, 1.0, l3);
                evals += m3.evals;
                return m3.value;
            };
            auto m2 = integrate_adaptive(detail::half_line(lvl2), 0.0, 1.0, l2);
            evals += m2.evals;
            return m2.value;
        };
        est = integrate_adaptive(detail::half_line(outer), 0.0, 1.0, opt);
        est.evals += evals;
    }
    return {std::log(est.value), est.abs_error / est.value, est.evals};
}

// Type-1 beta integral over O < X < I in original coordinates, p <= 2; the
// trailing diagonal entry runs over exactly the moving interval
// (X21 X11^{-1} X12, 1 - X21 (I - X11)^{-1} X12).
inline QuadratureValue quadrature_beta1(int p, double alpha, double beta,
                                        Field field = Field::real, QuadratureOptions opt = {}) {
    check_gamma_domain(p, alpha, field);
    check_gamma_domain(p, beta, field);
    if (p > 2) throw Error("deterministic quadrature is limited to p <= 2");

    IntegralEstimate est;
    if (p == 1) {
        est = integrate_adaptive(detail::smoothstep(
                                     [&](double x) {
                                         return std::pow(x, alpha - 1.0) *
                                                std::pow(1.0 - x, beta - 1.0);
                                     },
                                     0.0, 1.0),
                                 0.0, 1.0, opt);
    } else if (field == Field::real) {
        QuadratureOptions mid = opt, inner = opt;
        mid.rtol *= opt.inner_tightening;
        inner.rtol *= opt.inner_tightening * opt.inner_tightening;
        const double ea = alpha - 1.5, eb = beta - 1.5;
        long long evals = 0;
        auto outer = [&](double x11) {
            const double rmax = std::sqrt(x11 * (1.0 - x11));
            auto middle = [&](double x12) {
                const double q = x12 * x12;
                const double lo = q / x11, hi = 1.0 - q / (1.0 - x11);
                if (hi <= lo) return 0.0;
                auto in = integrate_adaptive(
                    detail::smoothstep(
                        [&](double x22) {
                            const double dx = x11 * x22 - q;
                            const double dix = (1.0 - x11) * (1.0 - x22) - q;
                            if (dx <= 0.0 || dix <= 0.0) return 0.0;
                            return std::pow(dx, ea) * std::pow(dix, eb);
                        },
                        lo, hi),
                    0.0, 1.0, inner);
                evals += in.evals;
                return in.value;
            };
            auto m = integrate_adaptive(detail::smoothstep(middle, -rmax, rmax), 0.0, 1.0, mid);
            evals += m.evals;
            return m.value;
        };
        est = integrate_adaptive(detail::smoothstep(outer, 0.0, 1.0), 0.0, 1.0, opt);
        est.evals += evals;
    } else {
        QuadratureOptions l2 = opt, l3 = opt, l4 = opt;
        l2.rtol *= opt.inner_tightening;
        l3.rtol *= opt.inner_tightening * opt.inner_tightening;
        l4.rtol *= opt.inner_tightening * opt.inner_tightening * opt.inner_tightening;
        const double ea = alpha - 2.0, eb = beta - 2.0;
        long long evals = 0;
        auto outer = [&](double x11) {
            const double rmax2 = x11 * (1.0 - x11);
            const double rmax = std::sqrt(rmax2);
            auto lvl2 = [&](double u) {
                const double s2 = rmax2 - u * u;
                if (s2 <= 0.0) return 0.0;
                const double s = std::sqrt(s2);
                auto lvl3 = [&](double v) {
                    const double q = u * u + v * v;
                    const double lo = q / x11, hi = 1.0 - q / (1.0 - x11);
                    if (hi <= lo) return 0.0;
                    auto in = integrate_adaptive(
                        detail::smoothstep(
                            [&](double x22) {
                                const double dx = x11 * x22 - q;
                                const double dix = (1.0 - x11) * (1.0 - x22) - q;
                                if (dx <= 0.0 || dix <= 0.0) return 0.0;
                                return std::pow(dx, ea) * std::pow(dix, eb);
                            },
                            lo, hi),
                        0.0, 1.0, l4);
                    evals += in.evals;
                    return in.value;
                };
                auto m3 = integrate_adaptive(detail::smoothstep(lvl3, -s, s), 0.0, 1.0, l3);
                evals += m3.evals;
                return m3.value;
            };
            auto m2 = integrate_adaptive(detail::smoothstep(lvl2, -rmax, rmax), 0.0, 1.0, l2);
            evals += m2.evals;
            return m2.value;
        };
        est = integrate_adaptive(detail::smoothstep(outer, 0.0, 1.0), 0.0, 1.0, opt);
        est.evals += evals;
    }
    return {std::log(est.value), est.abs_error / est.value, est.evals};
}

}  // namespace matvar
