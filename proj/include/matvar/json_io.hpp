#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "matvar/errors.hpp"
#include "matvar/ledger.hpp"
#include "matvar/matrix.hpp"
#include "matvar/reduction.hpp"
#include "matvar/samplers.hpp"
#include "matvar/verify.hpp"

namespace matvar {

using nlohmann::json;

// ---- matrix schema: {"p": int, "case": "real"|"complex", "entries": [[...]]},
// complex entries as two-element [re, im] arrays.

inline json to_json(const SpdMatrix& x) {
    json rows = json::array();
    for (int i = 0; i < x.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < x.dim(); ++j) row.push_back(x(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"p", x.dim()}, {"case", "real"}, {"entries", std::move(rows)}};
}

inline json to_json(const HpdMatrix& x) {
    json rows = json::array();
    for (int i = 0; i < x.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < x.dim(); ++j)
            row.push_back(json::array({x(i, j).real(), x(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return json{{"p", x.dim()}, {"case", "complex"}, {"entries", std::move(rows)}};
}

inline Field matrix_field(const json& j) {
    const std::string c = j.at("case").get<std::string>();
    if (c == "real") return Field::real;
    if (c == "complex") return Field::complex;
    throw Error("matrix case must be \"real\" or \"complex\"");
}

inline SpdMatrix spd_matrix_from_json(const json& j) {
    if (matrix_field(j) != Field::real) throw Error("expected a real-case matrix");
    const int p = j.at("p").get<int>();
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(p) * p);
    for (const auto& row : j.at("entries"))
        for (const auto& v : row) e.push_back(v.get<double>());
    return SpdMatrix(p, std::move(e));
}

inline HpdMatrix hpd_matrix_from_json(const json& j) {
    if (matrix_field(j) != Field::complex) throw Error("expected a complex-case matrix");
    const int p = j.at("p").get<int>();
    std::vector<std::complex<double>> e;
    e.reserve(static_cast<std::size_t>(p) * p);
    for (const auto& row : j.at("entries"))
        for (const auto& v : row)
            e.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return HpdMatrix(p, std::move(e));
}

// ---- symbolic trace schema

inline const char* to_string(FactorBase b) {
    switch (b) {
        case FactorBase::alpha: return "alpha";
        case FactorBase::beta: return "beta";
        case FactorBase::alpha_plus_beta: return "alpha_plus_beta";
        case FactorBase::pure_number: return "pure_number";
    }
    return "?";
}

inline const char* to_string(FactorSide s) {
    return s == FactorSide::numerator ? "numerator" : "denominator";
}

inline json to_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

inline json to_json(const GammaFactor& f) {
    return json{{"base", to_string(f.base)},
                {"twice_offset", f.offset.twice()},
                {"side", to_string(f.side)}};
}

inline json to_json(const FactorLedger& ledger) {
    json factors = json::array();
    for (const auto& f : ledger.factors()) factors.push_back(to_json(f));
    return json{{"pi_exponent", to_json(ledger.pi_exponent())}, {"factors", std::move(factors)}};
}

inline json to_json(const ReductionStep& step, bool audit = false) {
    json subs = json::array();
    for (auto s : step.substitutions) subs.push_back(to_string(s));
    json out{{"index", step.index},
             {"eliminated",
              json{{"size", step.eliminated.size}, {"last_index", step.eliminated.last_index}}},
             {"substitutions", std::move(subs)},
             {"contribution", to_json(step.contribution)},
             {"residual_exponent_shift", json{{"twice", step.residual_exponent_shift.twice()}}},
             {"alpha_bound", json{{"twice", step.alpha_bound.twice()}}}};
    if (step.beta_bound) out["beta_bound"] = json{{"twice", step.beta_bound->twice()}};
    if (audit) {
        json raw = json::array();
        for (const auto& f : step.uncancelled) raw.push_back(to_json(f));
        out["uncancelled"] = std::move(raw);
    }
    return out;
}

inline json to_json(const ReductionTrace& trace, bool audit = false) {
    json steps = json::array();
    for (const auto& s : trace.steps) steps.push_back(to_json(s, audit));
    json out{{"family", to_string(trace.family)},
             {"p", trace.p},
             {"schedule", trace.schedule},
             {"steps", std::move(steps)},
             {"total", to_json(trace.total)},
             {"closed_form", closed_form_name(trace.family, trace.p)},
             {"alpha_bound", json{{"twice", trace.alpha_bound.twice()}}}};
    if (trace.beta_bound) out["beta_bound"] = json{{"twice", trace.beta_bound->twice()}};
    return out;
}

// ---- verification schema

inline Family family_from_string(const std::string& s) {
    for (Family f : {Family::gamma_real, Family::gamma_complex, Family::beta1_real,
                     Family::beta1_complex, Family::beta2_real})
        if (s == to_string(f)) return f;
    throw Error("unknown family \"" + s + "\"");
}

inline json to_json(const McEstimate& est) {
    return json{{"log_value", est.log_value}, {"std_error", est.std_error},
                {"n_samples", est.n_samples}, {"seed", est.seed},
                {"stream_id", est.stream_id}, {"ess", est.ess}};
}

inline json to_json(const VerifyReport& report) {
    const auto& c = report.check;
    json out{{"family", to_string(c.family)},
             {"p", c.p},
             {"alpha", c.alpha},
             {"oracle", to_string(c.oracle)},
             {"closed_form_log", report.closed_form_log},
             {"pass", report.pass}};
    if (!std::isnan(c.beta)) out["beta"] = c.beta;
    if (!report.error.empty()) {
        out["error"] = report.error;
        return out;
    }
    out["oracle_log"] = report.oracle_log;
    if (c.oracle == OracleKind::quadrature) {
        out["rel_error"] = report.rel_error;
    } else {
        out["std_error"] = report.std_error;
        out["discrepancy_sigma"] = report.discrepancy_sigma;
        out["n"] = c.n;
        out["seed"] = c.seed;
        out["stream_id"] = c.stream_id;
    }
    return out;
}

inline VerifyCheck verify_check_from_json(const json& j) {
    VerifyCheck c;
    c.family = family_from_string(j.at("family").get<std::string>());
    c.p = j.at("p").get<int>();
    c.alpha = j.at("alpha").get<double>();
    if (j.contains("beta") && !j.at("beta").is_null()) c.beta = j.at("beta").get<double>();
    const std::string oracle = j.value("oracle", "quadrature");
    if (oracle == "quadrature")
        c.oracle = OracleKind::quadrature;
    else if (oracle == "mc")
        c.oracle = OracleKind::mc;
    else
        throw Error("oracle must be \"quadrature\" or \"mc\"");
    c.n = j.value("n", static_cast<long long>(1000000));
    c.seed = j.value("seed", static_cast<std::uint64_t>(0));
    c.stream_id = j.value("stream_id", static_cast<std::uint64_t>(0));
    c.max_rel_error = j.value("max_rel_error", 1e-4);
    c.max_sigma = j.value("max_sigma", 4.0);
    if (j.contains("max_std_error")) c.max_std_error = j.at("max_std_error").get<double>();
    return c;
}

inline VerifyConfig verify_config_from_json(const json& j) {
    VerifyConfig cfg;
    for (const auto& cj : j.at("checks")) cfg.checks.push_back(verify_check_from_json(cj));
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        cfg.mc.shards = m.value("shards", cfg.mc.shards);
        cfg.mc.threads = m.value("threads", cfg.mc.threads);
        cfg.mc.diag_shape_shift = m.value("diag_shape_shift", cfg.mc.diag_shape_shift);
        cfg.mc.offdiag_inflation = m.value("offdiag_inflation", cfg.mc.offdiag_inflation);
        cfg.mc.beta_diag_relax = m.value("beta_diag_relax", cfg.mc.beta_diag_relax);
        cfg.mc.beta_offdiag_sigma = m.value("beta_offdiag_sigma", cfg.mc.beta_offdiag_sigma);
    }
    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        cfg.quadrature.rtol = q.value("rtol", cfg.quadrature.rtol);
        cfg.quadrature.max_intervals = q.value("max_intervals", cfg.quadrature.max_intervals);
    }
    return cfg;
}

inline json to_json(const BlockGaussianReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back(json{{"row", e.row},
                               {"col", e.col},
                               {"ks_stat", e.ks_stat},
                               {"ks_critical", e.ks_critical},
                               {"pass", e.pass}});
    return json{{"p1", report.p1},
                {"p2", report.p2},
                {"alpha", report.alpha},
                {"n_draws", report.n_draws},
                {"seed", report.seed},
                {"stream_id", report.stream_id},
                {"entries", std::move(entries)},
                {"corr_trace", report.corr_trace},
                {"corr_logdet", report.corr_logdet},
                {"corr_threshold", report.corr_threshold},
                {"normality_pass", report.normality_pass},
                {"independence_pass", report.independence_pass},
                {"pass", report.pass}};
}

}  // namespace matvar
