#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "matvar/errors.hpp"

namespace matvar {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2ca9f2d0e5dULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Seeded, stream-indexed random source. Identical (seed, stream_id) produces
// bit-identical sequences across runs and platforms: the engine is the fully
// specified mt19937_64 and every variate below is derived from its raw output
// through fixed arithmetic only (no unspecified standard-library
// distributions).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t mix = seed ^ (stream_id * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
        // decorrelate nearby (seed, stream) pairs before seeding
        detail::splitmix64(mix);
        engine_.seed(detail::splitmix64(mix));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_raw() { return engine_(); }

    // uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform_positive() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    // standard normal via the Marsaglia polar method (spare value cached)
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double sigma) { return sigma * normal(); }

    // Gamma(shape, 1) by the Marsaglia-Tsang squeeze method; shapes below one
    // are boosted through Gamma(shape + 1) * U^{1/shape}.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw Error("gamma shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_positive(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_positive();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace matvar
