#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matvar/json_io.hpp"
#include "matvar/matvar.hpp"

namespace matvar::cli {

// Exit-code contract: 0 success, 1 verification failure, 2 usage/domain error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline Field parse_field(const std::string& s) {
    if (s == "real") return Field::real;
    if (s == "complex") return Field::complex;
    throw Error("--case must be real or complex");
}

struct FamilySpec {
    std::string kind;  // gamma | beta1 | beta2
    Field field = Field::real;

    bool is_beta() const { return kind != "gamma"; }

    Family family() const {
        if (kind == "gamma")
            return field == Field::real ? Family::gamma_real : Family::gamma_complex;
        if (kind == "beta1")
            return field == Field::real ? Family::beta1_real : Family::beta1_complex;
        if (kind == "beta2" && field == Field::real) return Family::beta2_real;
        throw Error("no reduction family for beta2 in the complex case; its closed form "
                    "coincides with the complex type-1 beta");
    }
};

inline std::vector<int> parse_schedule(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

inline std::string fmt(double v, int precision = 12) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

inline std::string trace_text(const ReductionTrace& trace, bool audit) {
    std::ostringstream os;
    os << "family: " << to_string(trace.family) << "   p: " << trace.p << "   schedule: ";
    for (std::size_t i = 0; i < trace.schedule.size(); ++i)
        os << (i ? "," : "") << trace.schedule[i];
    os << "\nvalid for: alpha > " << trace.alpha_bound.str();
    if (trace.beta_bound) os << ", beta > " << trace.beta_bound->str();
    os << "\n";
    for (const auto& step : trace.steps) {
        os << "step " << step.index << ": eliminate ";
        if (step.eliminated.size == 1)
            os << "x_" << step.eliminated.last_index << "," << step.eliminated.last_index;
        else
            os << "block of size " << step.eliminated.size;
        if (!step.substitutions.empty()) {
            os << " [";
            for (std::size_t i = 0; i < step.substitutions.size(); ++i)
                os << (i ? ", " : "") << to_string(step.substitutions[i]);
            os << "]";
        }
        os << "\n    contribution: " << step.contribution.str() << "\n";
        if (audit && !step.uncancelled.empty()) {
            os << "    uncancelled: ";
            for (std::size_t i = 0; i < step.uncancelled.size(); ++i) {
                const auto& f = step.uncancelled[i];
                os << (i ? " " : "") << f.str()
                   << (f.side == FactorSide::denominator ? "^-1" : "");
            }
            os << "\n";
        }
        os << "    residual exponent shift: +" << step.residual_exponent_shift.str()
           << "    requires: alpha > " << step.alpha_bound.str();
        if (step.beta_bound) os << ", beta > " << step.beta_bound->str();
        os << "\n";
    }
    os << "total: " << trace.total.str() << "\n     = " << closed_form_name(trace.family, trace.p)
       << "\n";
    return os.str();
}

inline std::string report_text(const VerifyReport& r) {
    std::ostringstream os;
    os << (r.pass ? "[PASS] " : "[FAIL] ") << to_string(r.check.family) << " p=" << r.check.p
       << " alpha=" << fmt(r.check.alpha, 6);
    if (!std::isnan(r.check.beta)) os << " beta=" << fmt(r.check.beta, 6);
    os << " oracle=" << to_string(r.check.oracle);
    if (!r.error.empty()) {
        os << " error: " << r.error;
        return os.str();
    }
    os << " log_closed_form=" << fmt(r.closed_form_log) << " log_oracle=" << fmt(r.oracle_log);
    if (r.check.oracle == OracleKind::quadrature)
        os << " rel_error=" << fmt(r.rel_error, 3);
    else
        os << " std_error=" << fmt(r.std_error, 3)
           << " discrepancy=" << fmt(r.discrepancy_sigma, 3) << "sigma";
    return os.str();
}

}  // namespace detail

// Runs the command line against the given streams; never writes elsewhere, so
// callers (including tests) can capture everything.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"matrix-variate gamma/beta integrals: evaluation, symbolic reduction "
                 "traces, sampling, numerical verification"};
    app.require_subcommand(1);

    detail::FamilySpec fam;
    int p = 1;
    double alpha = 0.0, beta = std::numeric_limits<double>::quiet_NaN();
    std::string case_name = "real", format = "text", schedule_text, output_path, config_path;
    std::string route_name = "gaussian", oracle_name;
    long long n = 10;
    std::uint64_t seed = 0, stream_id = 0;
    bool audit = false, use_default = false;

    auto add_common = [&](CLI::App* cmd, bool need_alpha) {
        cmd->add_option("--family", fam.kind, "gamma | beta1 | beta2")->required();
        cmd->add_option("--case", case_name, "real | complex")
            ->check(CLI::IsMember({"real", "complex"}));
        cmd->add_option("--p", p, "matrix dimension")->required()->check(CLI::PositiveNumber);
        auto* a = cmd->add_option("--alpha", alpha, "first shape parameter");
        if (need_alpha) a->required();
        cmd->add_option("--beta", beta, "second shape parameter (beta families)");
        cmd->add_option("--format", format, "text | json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--output", output_path, "write to file instead of stdout");
    };

    auto* eval_cmd = app.add_subcommand("eval", "closed-form log and linear values");
    add_common(eval_cmd, true);

    auto* reduce_cmd = app.add_subcommand("reduce", "symbolic partitioned-reduction trace");
    add_common(reduce_cmd, false);
    reduce_cmd->add_option("--schedule", schedule_text,
                           "comma-separated block sizes (default: one at a time)");
    reduce_cmd->add_option("--route", route_name, "block route: gaussian | stiefel")
        ->check(CLI::IsMember({"gaussian", "stiefel"}));
    reduce_cmd->add_flag("--audit", audit, "include uncancelled factors per step");

    auto* sample_cmd = app.add_subcommand("sample", "draw matrices as JSON lines");
    add_common(sample_cmd, true);
    sample_cmd->add_option("--n", n, "number of draws")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", seed, "RNG seed");
    sample_cmd->add_option("--stream-id", stream_id, "RNG stream id");

    auto* verify_cmd = app.add_subcommand("verify", "run numerical verification checks");
    verify_cmd->add_flag("--default", use_default, "run the built-in verification grid");
    verify_cmd->add_option("--config", config_path, "JSON config file");
    verify_cmd->add_option("--family", fam.kind, "single check: gamma | beta1 | beta2");
    verify_cmd->add_option("--case", case_name, "real | complex")
        ->check(CLI::IsMember({"real", "complex"}));
    verify_cmd->add_option("--p", p, "matrix dimension");
    verify_cmd->add_option("--alpha", alpha, "first shape parameter");
    verify_cmd->add_option("--beta", beta, "second shape parameter");
    verify_cmd->add_option("--oracle", oracle_name, "quadrature | mc")
        ->check(CLI::IsMember({"quadrature", "mc"}));
    verify_cmd->add_option("--n", n, "MC sample count");
    verify_cmd->add_option("--seed", seed, "MC seed");
    verify_cmd->add_option("--stream-id", stream_id, "MC stream id");
    verify_cmd->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    verify_cmd->add_option("--output", output_path, "write to file instead of stdout");

    try {
        std::vector<const char*> argv;
        argv.push_back("matvar");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ofstream file_out;
    std::ostream* sink = &out;
    if (!output_path.empty()) {
        file_out.open(output_path);
        if (!file_out) {
            err << "cannot open output file " << output_path << "\n";
            return kExitUsage;
        }
        sink = &file_out;
    }

    try {
        fam.field = detail::parse_field(case_name);

        if (app.got_subcommand(eval_cmd)) {
            if (fam.is_beta() && std::isnan(beta)) throw Error("beta families need --beta");
            const double log_value =
                fam.is_beta() ? log_beta_p(p, alpha, beta, fam.field)
                              : log_multivariate_gamma(p, alpha, fam.field);
            std::optional<double> linear;
            if (log_value <= kDefaultMaxExpLog) linear = std::exp(log_value);
            if (format == "json") {
                json j{{"family", fam.kind}, {"case", case_name},      {"p", p},
                       {"alpha", alpha},     {"log_value", log_value}};
                if (!std::isnan(beta)) j["beta"] = beta;
                j["linear_value"] = linear ? json(*linear) : json(nullptr);
                *sink << j.dump() << "\n";
            } else {
                *sink << "log value:    " << detail::fmt(log_value) << "\n";
                *sink << "linear value: "
                      << (linear ? detail::fmt(*linear) : std::string("overflow (log > 700)"))
                      << "\n";
            }
            return kExitOk;
        }

        if (app.got_subcommand(reduce_cmd)) {
            const Family family = fam.family();
            const BlockRoute route =
                route_name == "stiefel" ? BlockRoute::stiefel : BlockRoute::gaussian;
            std::vector<int> schedule;
            if (!schedule_text.empty()) schedule = detail::parse_schedule(schedule_text);
            ReductionTrace trace;
            switch (family) {
                case Family::gamma_real: trace = reduce_gamma_real(p, schedule, route); break;
                case Family::gamma_complex:
                    trace = reduce_gamma_complex(p, schedule, route);
                    break;
                case Family::beta1_real:
                case Family::beta1_complex:
                    if (!schedule.empty())
                        throw InvalidSchedule("beta traces are one-at-a-time only");
                    trace = reduce_beta1(p, fam.field);
                    break;
                case Family::beta2_real:
                    if (!schedule.empty())
                        throw InvalidSchedule("beta traces are one-at-a-time only");
                    trace = reduce_beta2_real(p);
                    break;
            }
            if (format == "json")
                *sink << to_json(trace, audit).dump(2) << "\n";
            else
                *sink << detail::trace_text(trace, audit);
            return kExitOk;
        }

        if (app.got_subcommand(sample_cmd)) {
            if (fam.is_beta() && std::isnan(beta)) throw Error("beta families need --beta");
            RngStream rng(seed, stream_id);
            json header{{"kind", "matvar.sample"},
                        {"version", 1},
                        {"family", fam.kind},
                        {"case", case_name},
                        {"p", p},
                        {"alpha", alpha},
                        {"n", n},
                        {"seed", seed},
                        {"stream_id", stream_id}};
            if (!std::isnan(beta)) header["beta"] = beta;
            *sink << header.dump() << "\n";
            for (long long i = 0; i < n; ++i) {
                json row;
                if (!fam.is_beta()) {
                    if (fam.field == Field::real)
                        row = to_json(sample_gamma_real(p, alpha, rng));
                    else
                        row = to_json(sample_gamma_complex(p, alpha, rng));
                } else {
                    const auto kind = fam.kind == "beta1" ? BetaKind::type1 : BetaKind::type2;
                    MatrixBetaParams params(p, alpha, beta, kind, fam.field);
                    if (fam.field == Field::real)
                        row = to_json(sample_beta_real(params, rng));
                    else
                        row = to_json(sample_beta_complex(params, rng));
                }
                *sink << row.dump() << "\n";
            }
            return kExitOk;
        }

        // verify
        VerifyConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw Error("cannot read config file " + config_path);
            json j;
            try {
                j = json::parse(in);
                cfg = verify_config_from_json(j);
            } catch (const json::exception& e) {
                throw Error(std::string("bad config: ") + e.what());
            }
        } else if (use_default) {
            cfg = default_verify_config();
        } else if (!fam.kind.empty()) {
            VerifyCheck c;
            c.family = fam.family();
            c.p = p;
            c.alpha = alpha;
            c.beta = beta;
            c.oracle = oracle_name == "mc" ? OracleKind::mc : OracleKind::quadrature;
            c.n = n > 10 ? n : 1000000;
            c.seed = seed;
            c.stream_id = stream_id;
            cfg.checks.push_back(c);
        } else {
            throw Error("verify needs --default, --config, or single-check flags");
        }

        const auto reports = run_suite(cfg);
        bool all_pass = true;
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : reports) {
                arr.push_back(to_json(r));
                all_pass = all_pass && r.pass;
            }
            *sink << arr.dump(2) << "\n";
        } else {
            for (const auto& r : reports) {
                *sink << detail::report_text(r) << "\n";
                all_pass = all_pass && r.pass;
            }
            *sink << (all_pass ? "all checks passed" : "some checks FAILED") << "\n";
        }
        return all_pass ? kExitOk : kExitVerifyFailed;
    } catch (const GammaDomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace matvar::cli
