#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matvar/errors.hpp"
#include "matvar/gammafn.hpp"
#include "matvar/half_int.hpp"

namespace matvar {

// Symbolic argument of a scalar gamma factor: one of the family parameters
// plus an exact half-integer offset, or a pure number (Stiefel-type factors
// like Gamma((p-1)/2), whose argument lives in `offset`).
enum class FactorBase { alpha, beta, alpha_plus_beta, pure_number };
enum class FactorSide { numerator, denominator };

struct GammaFactor {
    FactorBase base;
    HalfInt offset;
    FactorSide side;

    bool operator==(const GammaFactor&) const = default;

    double argument(double alpha, std::optional<double> beta) const {
        switch (base) {
            case FactorBase::alpha: return alpha + offset.value();
            case FactorBase::beta:
            case FactorBase::alpha_plus_beta:
                if (!beta) throw Error("ledger contains beta factors but no beta was supplied");
                return (base == FactorBase::beta ? *beta : alpha + *beta) + offset.value();
            case FactorBase::pure_number: return offset.value();
        }
        return 0.0;
    }

    std::string str() const {
        if (base == FactorBase::pure_number) return "Gamma(" + offset.str() + ")";
        std::string sym = base == FactorBase::alpha ? "alpha"
                          : base == FactorBase::beta ? "beta"
                                                     : "alpha + beta";
        if (offset.twice() == 0) return "Gamma(" + sym + ")";
        std::string sign = offset.twice() > 0 ? " + " : " - ";
        HalfInt mag = offset.twice() > 0 ? offset : -offset;
        return "Gamma(" + sym + sign + mag.str() + ")";
    }
};

// Exact product  pi^(pi_exponent) * prod Gamma(...)^(+/-1).
// Stored canonically: identical numerator/denominator factors cancel on
// insertion, so equality is multiset equality of the normalized form.
class FactorLedger {
  public:
    using Key = std::pair<FactorBase, HalfInt>;

    const Rational& pi_exponent() const { return pi_exponent_; }

    void multiply_pi(Rational e) { pi_exponent_ += e; }

    void multiply_gamma(FactorBase base, HalfInt offset, FactorSide side, long long count = 1) {
        if (count == 0) return;
        const Key k{base, offset};
        auto [it, inserted] =
            factors_.try_emplace(k, side == FactorSide::numerator ? count : -count);
        if (!inserted) {
            it->second += side == FactorSide::numerator ? count : -count;
            if (it->second == 0) factors_.erase(it);
        }
    }

    void multiply_gamma(const GammaFactor& f) { multiply_gamma(f.base, f.offset, f.side); }

    void multiply(const FactorLedger& other) {
        pi_exponent_ += other.pi_exponent_;
        for (const auto& [k, c] : other.factors_)
            multiply_gamma(k.first, k.second,
                           c > 0 ? FactorSide::numerator : FactorSide::denominator,
                           c > 0 ? c : -c);
    }

    bool operator==(const FactorLedger&) const = default;

    // Normalized factors, numerators first, each repeated by multiplicity.
    std::vector<GammaFactor> factors() const {
        std::vector<GammaFactor> out;
        for (auto side : {FactorSide::numerator, FactorSide::denominator})
            for (const auto& [k, c] : factors_) {
                const long long n = side == FactorSide::numerator ? c : -c;
                for (long long i = 0; i < n; ++i) out.push_back({k.first, k.second, side});
            }
        return out;
    }

    long long factor_count(FactorSide side) const {
        long long n = 0;
        for (const auto& [k, c] : factors_)
            n += side == FactorSide::numerator ? std::max(c, 0LL) : std::max(-c, 0LL);
        return n;
    }

    std::string str() const {
        std::string num, den;
        for (const auto& f : factors()) (f.side == FactorSide::numerator ? num : den) += f.str();
        std::string out;
        if (pi_exponent_.num() != 0) out += "pi^(" + pi_exponent_.str() + ")";
        if (!num.empty()) out += (out.empty() ? "" : " * ") + num;
        if (out.empty()) out = "1";
        if (!den.empty()) out += " / " + den;
        return out;
    }

  private:
    Rational pi_exponent_;
    std::map<Key, long long> factors_;  // multiplicity: > 0 numerator, < 0 denominator
};

// Numeric log value of a ledger at given parameters:
// pi_exponent * log(pi) + sum log Gamma(num args) - sum log Gamma(den args).
inline double ledger_to_log_value(const FactorLedger& ledger, double alpha,
                                  std::optional<double> beta = std::nullopt) {
    double acc = ledger.pi_exponent().value() * std::log(std::numbers::pi);
    for (const auto& f : ledger.factors()) {
        const double arg = f.argument(alpha, beta);
        if (!(arg > 0.0)) throw GammaDomainError(0.0, arg, Field::real);
        acc += (f.side == FactorSide::numerator ? 1.0 : -1.0) * std::lgamma(arg);
    }
    return acc;
}

}  // namespace matvar
