#pragma once

#include <vector>

#include "matvar/matvar.hpp"

namespace matvar::testing {

// Well-conditioned random positive-definite matrices for property tests.
inline SpdMatrix random_spd(int p, RngStream& rng) {
    return sample_gamma_real(p, p + 2.0, rng);
}

inline HpdMatrix random_hpd(int p, RngStream& rng) {
    return sample_gamma_complex(p, p + 2.0, rng);
}

inline double random_alpha(double bound, RngStream& rng) {
    return bound + 0.1 + 5.0 * rng.uniform();
}

// All compositions of p into ordered positive parts.
inline std::vector<std::vector<int>> compositions(int p) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int b = 1; b <= rest; ++b) {
            cur.push_back(b);
            self(self, rest - b);
            cur.pop_back();
        }
    };
    rec(rec, p);
    return out;
}

}  // namespace matvar::testing
