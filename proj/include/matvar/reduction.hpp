#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "matvar/errors.hpp"
#include "matvar/ledger.hpp"

namespace matvar {

enum class Family { gamma_real, gamma_complex, beta1_real, beta1_complex, beta2_real };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::gamma_real: return "gamma_real";
        case Family::gamma_complex: return "gamma_complex";
        case Family::beta1_real: return "beta1_real";
        case Family::beta1_complex: return "beta1_complex";
        case Family::beta2_real: return "beta2_real";
    }
    return "?";
}

inline Field family_field(Family f) {
    return (f == Family::gamma_complex || f == Family::beta1_complex) ? Field::complex
                                                                      : Field::real;
}

// Fixed catalog of the substitutions the evaluations use. Each trace step
// names the moves it performed, in order, so a trace can be audited line by
// line against the derivation it replays.
enum class Substitution {
    schur_split,     // |X| = |X11| * |X22 - X21 X11^{-1} X12|
    y_shift,         // eliminated coordinate recentred/whitened (Y or y variable)
    u_ratio,         // u = y / b for the shifted scalar over its moving range
    w_whiten,        // W = X21 X11^{-1/2} (I -/+ X11)^{-1/2}
    stiefel,         // direction integral at fixed squared length: pi^{k/2}/Gamma(k/2)
    gaussian_block,  // exp(-tr(Y Y')) integrates to a pure power of pi
    u_shift_block,   // U = X22 - X21 X11^{-1} X12 as the new block variable
};

inline const char* to_string(Substitution s) {
    switch (s) {
        case Substitution::schur_split: return "schur_split";
        case Substitution::y_shift: return "y_shift";
        case Substitution::u_ratio: return "u_ratio";
        case Substitution::w_whiten: return "w_whiten";
        case Substitution::stiefel: return "stiefel";
        case Substitution::gaussian_block: return "gaussian_block";
        case Substitution::u_shift_block: return "u_shift_block";
    }
    return "?";
}

// For block schedules: integrate the trailing block through the Stiefel
// manifold, or through the Gaussian structure of the off-diagonal block
// (which avoids the Stiefel integral and any p1 >= p2 assumption).
enum class BlockRoute { gaussian, stiefel };

struct EliminatedBlock {
    int size;        // 1 for a scalar x_kk step
    int last_index;  // 1-based index (in the original matrix) of its last diagonal entry

    bool operator==(const EliminatedBlock&) const = default;
};

struct ReductionStep {
    int index = 0;  // 1-based
    EliminatedBlock eliminated{};
    std::vector<Substitution> substitutions;
    FactorLedger contribution;             // after internal cancellation
    std::vector<GammaFactor> uncancelled;  // every factor produced, transient pairs included
    HalfInt residual_exponent_shift;       // added to the surviving determinant exponent
    HalfInt alpha_bound;                   // this step converges iff alpha > bound
    std::optional<HalfInt> beta_bound;
};

struct ReductionTrace {
    Family family{};
    int p = 0;
    std::vector<int> schedule;
    std::vector<ReductionStep> steps;
    FactorLedger total;
    HalfInt alpha_bound;  // max over steps: the family's validity condition
    std::optional<HalfInt> beta_bound;
};

namespace detail {

inline void expand_multivariate_gamma(FactorLedger& ledger, int m, FactorBase base,
                                      HalfInt offset, Field field, FactorSide side) {
    // Gamma_m(x) = pi^{m(m-1)/4} prod_j Gamma(x - j/2); complex analogue has
    // integer offsets and pi exponent m(m-1)/2.
    const Rational pi_e = field == Field::real ? Rational(m * (m - 1), 4)
                                               : Rational(m * (m - 1), 2);
    ledger.multiply_pi(side == FactorSide::numerator ? pi_e : Rational(0) - pi_e);
    for (int j = 0; j < m; ++j) {
        const HalfInt step_off =
            field == Field::real ? HalfInt::from_twice(-j) : HalfInt(-j);
        ledger.multiply_gamma(base, offset + step_off, side);
    }
}

inline void push_uncancelled(ReductionStep& step, FactorBase base, HalfInt offset,
                             FactorSide side) {
    step.uncancelled.push_back({base, offset, side});
}

inline void finish_trace(ReductionTrace& trace) {
    for (auto& s : trace.steps) {
        trace.total.multiply(s.contribution);
        trace.alpha_bound = std::max(trace.alpha_bound, s.alpha_bound);
        if (s.beta_bound)
            trace.beta_bound = trace.beta_bound ? std::max(*trace.beta_bound, *s.beta_bound)
                                                : *s.beta_bound;
    }
}

inline std::vector<int> normalize_schedule(int p, std::vector<int> schedule) {
    if (schedule.empty()) schedule.assign(p, 1);
    for (int b : schedule)
        if (b <= 0) throw InvalidSchedule("block sizes must be positive");
    if (std::accumulate(schedule.begin(), schedule.end(), 0) != p)
        throw InvalidSchedule("block sizes must sum to p");
    return schedule;
}

// One scalar elimination of the gamma trace at current size m. The three
// transient factors (the x_kk gamma, and the Stiefel gamma that the u-integral
// returns) cancel inside the step; only pi^{(m-1)/2} Gamma(alpha - (m-1)/2)
// survives (integer offsets and pi^{m-1} in the complex case).
inline ReductionStep gamma_scalar_step(int k, int m, Field field) {
    ReductionStep step;
    step.index = k;
    step.eliminated = {1, m};
    const HalfInt unit = field == Field::real ? HalfInt::half(1) : HalfInt(1);
    const HalfInt off = field == Field::real ? HalfInt::from_twice(-(m - 1)) : HalfInt(-(m - 1));
    step.residual_exponent_shift = unit;
    step.alpha_bound = -off;
    if (m == 1) {
        step.contribution.multiply_gamma(FactorBase::alpha, HalfInt(0), FactorSide::numerator);
        push_uncancelled(step, FactorBase::alpha, HalfInt(0), FactorSide::numerator);
        return step;
    }
    step.substitutions = {Substitution::schur_split, Substitution::y_shift,
                          Substitution::stiefel};
    const Rational pi_e = field == Field::real ? Rational(m - 1, 2) : Rational(m - 1);
    step.contribution.multiply_pi(pi_e);
    step.contribution.multiply_gamma(FactorBase::alpha, off, FactorSide::numerator);
    // x_kk integral
    push_uncancelled(step, FactorBase::alpha, HalfInt(0), FactorSide::numerator);
    // Stiefel factor
    push_uncancelled(step, FactorBase::pure_number, -off, FactorSide::denominator);
    // u-integral
    push_uncancelled(step, FactorBase::pure_number, -off, FactorSide::numerator);
    push_uncancelled(step, FactorBase::alpha, off, FactorSide::numerator);
    push_uncancelled(step, FactorBase::alpha, HalfInt(0), FactorSide::denominator);
    return step;
}

// Block elimination of the trailing p2 x p2 block with p1 rows remaining.
// Gaussian route: block shift U = X22 - X21 X11^{-1} X12, then the exponential
// of the off-diagonal block integrates to pi^{p1 p2 / 2} (pi^{p1 p2} complex).
// Stiefel route: whiten the off-diagonal block and integrate over directions;
// needs p1 >= p2 for the squared block to be nonsingular.
inline ReductionStep gamma_block_step(int k, int p1, int p2, Field field, BlockRoute route) {
    ReductionStep step;
    step.index = k;
    step.eliminated = {p2, p1 + p2};
    const bool real = field == Field::real;
    step.residual_exponent_shift = real ? HalfInt::from_twice(p2) : HalfInt(p2);
    const HalfInt shifted = real ? HalfInt::from_twice(-p1) : HalfInt(-p1);
    // Gamma_{p2}(alpha - p1/2) needs alpha - p1/2 > (p2-1)/2
    step.alpha_bound = real ? HalfInt::from_twice(p1 + p2 - 1) : HalfInt(p1 + p2 - 1);

    const Rational gauss_pi = real ? Rational(p1 * p2, 2) : Rational(p1 * p2);
    step.contribution.multiply_pi(gauss_pi);
    expand_multivariate_gamma(step.contribution, p2, FactorBase::alpha, shifted, field,
                              FactorSide::numerator);

    FactorLedger raw;
    if (route == BlockRoute::gaussian) {
        step.substitutions = {Substitution::schur_split, Substitution::u_shift_block,
                              Substitution::gaussian_block};
        raw = step.contribution;
    } else {
        if (p1 < p2)
            throw InvalidSchedule("stiefel block route requires p1 >= p2 at every step");
        step.substitutions = {Substitution::schur_split, Substitution::y_shift,
                              Substitution::stiefel};
        // pi^{p1 p2 / 2} / Gamma_{p2}(p1/2) from the Stiefel manifold, then the
        // type-1 block integral Gamma_{p2}(p1/2) Gamma_{p2}(alpha - p1/2) / Gamma_{p2}(alpha),
        // then Gamma_{p2}(alpha) from the diagonal block.
        const HalfInt half_p1 = real ? HalfInt::from_twice(p1) : HalfInt(p1);
        raw.multiply_pi(gauss_pi);
        expand_multivariate_gamma(raw, p2, FactorBase::pure_number, half_p1, field,
                                  FactorSide::denominator);
        expand_multivariate_gamma(raw, p2, FactorBase::pure_number, half_p1, field,
                                  FactorSide::numerator);
        expand_multivariate_gamma(raw, p2, FactorBase::alpha, shifted, field,
                                  FactorSide::numerator);
        expand_multivariate_gamma(raw, p2, FactorBase::alpha, HalfInt(0), field,
                                  FactorSide::denominator);
        expand_multivariate_gamma(raw, p2, FactorBase::alpha, HalfInt(0), field,
                                  FactorSide::numerator);
    }
    step.uncancelled = raw.factors();
    return step;
}

// Final step of a block schedule: the leading block is a whole m-variate
// gamma integral.
inline ReductionStep gamma_final_block_step(int k, int m, Field field) {
    ReductionStep step;
    step.index = k;
    step.eliminated = {m, m};
    const bool real = field == Field::real;
    step.residual_exponent_shift = real ? HalfInt::from_twice(m) : HalfInt(m);
    step.alpha_bound = real ? HalfInt::from_twice(m - 1) : HalfInt(m - 1);
    expand_multivariate_gamma(step.contribution, m, FactorBase::alpha, HalfInt(0), field,
                              FactorSide::numerator);
    step.uncancelled = step.contribution.factors();
    return step;
}

inline ReductionTrace reduce_gamma(int p, std::vector<int> schedule, Field field,
                                   BlockRoute route) {
    if (p < 1) throw InvalidSchedule("p must be positive");
    schedule = normalize_schedule(p, std::move(schedule));
    ReductionTrace trace;
    trace.family = field == Field::real ? Family::gamma_real : Family::gamma_complex;
    trace.p = p;
    trace.schedule = schedule;

    const bool one_at_a_time = std::all_of(schedule.begin(), schedule.end(),
                                           [](int b) { return b == 1; });
    if (one_at_a_time) {
        for (int k = 1; k <= p; ++k) trace.steps.push_back(gamma_scalar_step(k, p - k + 1, field));
    } else {
        int k = 1;
        for (int i = static_cast<int>(schedule.size()) - 1; i >= 1; --i) {
            const int p2 = schedule[i];
            const int p1 = std::accumulate(schedule.begin(), schedule.begin() + i, 0);
            trace.steps.push_back(gamma_block_step(k++, p1, p2, field, route));
        }
        trace.steps.push_back(gamma_final_block_step(k, schedule.front(), field));
    }
    finish_trace(trace);
    return trace;
}

}  // namespace detail

inline ReductionTrace reduce_gamma_real(int p, std::vector<int> schedule = {},
                                        BlockRoute route = BlockRoute::gaussian) {
    return detail::reduce_gamma(p, std::move(schedule), Field::real, route);
}

inline ReductionTrace reduce_gamma_complex(int p, std::vector<int> schedule = {},
                                           BlockRoute route = BlockRoute::gaussian) {
    return detail::reduce_gamma(p, std::move(schedule), Field::complex, route);
}

// Type-1 beta trace, one scalar at a time. Step at current size m produces
//   pi^{(m-1)/2} Gamma(a-(m-1)/2) Gamma(b-(m-1)/2) / Gamma(a+b-(m-1)/2)
// (integer offsets, pi^{m-1} in the complex case); the Stiefel gamma and the
// u-integral's a+b gamma are transient and cancel within the step.
inline ReductionTrace reduce_beta1(int p, Field field) {
    if (p < 1) throw InvalidSchedule("p must be positive");
    ReductionTrace trace;
    trace.family = field == Field::real ? Family::beta1_real : Family::beta1_complex;
    trace.p = p;
    trace.schedule.assign(p, 1);
    const bool real = field == Field::real;
    for (int k = 1; k <= p; ++k) {
        const int m = p - k + 1;
        ReductionStep step;
        step.index = k;
        step.eliminated = {1, m};
        step.residual_exponent_shift = real ? HalfInt::half(1) : HalfInt(1);
        const HalfInt off = real ? HalfInt::from_twice(-(m - 1)) : HalfInt(-(m - 1));
        step.alpha_bound = -off;
        step.beta_bound = -off;

        step.contribution.multiply_gamma(FactorBase::alpha, off, FactorSide::numerator);
        step.contribution.multiply_gamma(FactorBase::beta, off, FactorSide::numerator);
        step.contribution.multiply_gamma(FactorBase::alpha_plus_beta, off,
                                         FactorSide::denominator);
        if (m == 1) {
            step.uncancelled = step.contribution.factors();
            trace.steps.push_back(std::move(step));
            continue;
        }
        step.substitutions = {Substitution::schur_split, Substitution::y_shift,
                              Substitution::u_ratio, Substitution::w_whiten,
                              Substitution::stiefel};
        step.contribution.multiply_pi(real ? Rational(m - 1, 2) : Rational(m - 1));
        // u-integral over (0,1); its denominator gamma has twice the offset step
        const HalfInt u_den_off = off + off;
        detail::push_uncancelled(step, FactorBase::alpha, off, FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::beta, off, FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::alpha_plus_beta, u_den_off,
                                 FactorSide::denominator);
        // Stiefel factor
        detail::push_uncancelled(step, FactorBase::pure_number, -off, FactorSide::denominator);
        // v-integral over (0,1)
        detail::push_uncancelled(step, FactorBase::pure_number, -off, FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::alpha_plus_beta, u_den_off,
                                 FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::alpha_plus_beta, off,
                                 FactorSide::denominator);
        trace.steps.push_back(std::move(step));
    }
    detail::finish_trace(trace);
    return trace;
}

// Type-2 beta trace by the same schedule. The moving-bound pair (y, b) lives
// on (0, infinity) here, so the step's surviving beta-gamma carries the offset
// -(k-1)/2 of the step index rather than the residual size; the product still
// telescopes to exactly the B_p ledger.
inline ReductionTrace reduce_beta2_real(int p) {
    if (p < 1) throw InvalidSchedule("p must be positive");
    ReductionTrace trace;
    trace.family = Family::beta2_real;
    trace.p = p;
    trace.schedule.assign(p, 1);
    for (int k = 1; k <= p; ++k) {
        const int m = p - k + 1;
        ReductionStep step;
        step.index = k;
        step.eliminated = {1, m};
        step.residual_exponent_shift = HalfInt::half(1);
        const HalfInt size_off = HalfInt::from_twice(-(m - 1));
        const HalfInt index_off = HalfInt::from_twice(-(k - 1));
        step.alpha_bound = -size_off;
        step.beta_bound = -index_off;

        step.contribution.multiply_gamma(FactorBase::alpha, size_off, FactorSide::numerator);
        step.contribution.multiply_gamma(FactorBase::beta, index_off, FactorSide::numerator);
        step.contribution.multiply_gamma(FactorBase::alpha_plus_beta, index_off,
                                         FactorSide::denominator);
        if (m == 1) {
            step.uncancelled = step.contribution.factors();
            trace.steps.push_back(std::move(step));
            continue;
        }
        step.substitutions = {Substitution::schur_split, Substitution::y_shift,
                              Substitution::u_ratio, Substitution::w_whiten,
                              Substitution::stiefel};
        step.contribution.multiply_pi(Rational(m - 1, 2));
        // u-integral over (0, infinity): Gamma(a - (m-1)/2) Gamma(t) / Gamma(a+b - (k-1)/2)
        // with the transient t = b + (m-k)/2.
        const HalfInt transient = HalfInt::from_twice(m - k);
        detail::push_uncancelled(step, FactorBase::alpha, size_off, FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::beta, transient, FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::alpha_plus_beta, index_off,
                                 FactorSide::denominator);
        // Stiefel factor
        detail::push_uncancelled(step, FactorBase::pure_number, -size_off,
                                 FactorSide::denominator);
        // v-integral over (0, infinity)
        detail::push_uncancelled(step, FactorBase::pure_number, -size_off,
                                 FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::beta, index_off, FactorSide::numerator);
        detail::push_uncancelled(step, FactorBase::beta, transient, FactorSide::denominator);
        trace.steps.push_back(std::move(step));
    }
    detail::finish_trace(trace);
    return trace;
}

inline ReductionTrace reduce_beta1_real(int p) { return reduce_beta1(p, Field::real); }
inline ReductionTrace reduce_beta1_complex(int p) { return reduce_beta1(p, Field::complex); }

// The normalized ledger every trace of the family must reach.
inline FactorLedger closed_form_ledger(Family family, int p) {
    FactorLedger ledger;
    const Field field = family_field(family);
    const bool gamma = family == Family::gamma_real || family == Family::gamma_complex;
    detail::expand_multivariate_gamma(ledger, p, FactorBase::alpha, HalfInt(0), field,
                                      FactorSide::numerator);
    if (!gamma) {
        detail::expand_multivariate_gamma(ledger, p, FactorBase::beta, HalfInt(0), field,
                                          FactorSide::numerator);
        detail::expand_multivariate_gamma(ledger, p, FactorBase::alpha_plus_beta, HalfInt(0),
                                          field, FactorSide::denominator);
    }
    return ledger;
}

inline std::string closed_form_name(Family family, int p) {
    const std::string dim = std::to_string(p);
    switch (family) {
        case Family::gamma_real: return "Gamma_" + dim + "(alpha)";
        case Family::gamma_complex: return "cGamma_" + dim + "(alpha)";
        case Family::beta1_real:
        case Family::beta2_real: return "B_" + dim + "(alpha, beta)";
        case Family::beta1_complex: return "cB_" + dim + "(alpha, beta)";
    }
    return "?";
}

}  // namespace matvar
