#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "matvar/errors.hpp"

namespace matvar {

inline double normal_cdf(double x, double sigma = 1.0) {
    return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
inline double ks_statistic(std::vector<double> data, const std::function<double(double)>& cdf) {
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = cdf(data[i]);
        d = std::max(d, std::max((i + 1) / n - f, f - i / n));
    }
    return d;
}

// Asymptotic critical value: reject at `level` when D > c(level)/sqrt(n),
// c = sqrt(-log(level/2)/2).
inline double ks_critical(std::size_t n, double level = 0.01) {
    return std::sqrt(-std::log(level / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw Error("correlation needs paired samples");
    const double mx = mean(xs), my = mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Two-sided z threshold for testing rho = 0 at `level` with n pairs.
inline double correlation_threshold(std::size_t n, double level = 0.01) {
    // quantile via bisection on the normal cdf; level/2 in each tail
    double lo = 0.0, hi = 10.0;
    const double target = 1.0 - level / 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

}  // namespace matvar
