// Command-line front end: analyze-prr / analyze-loop / simulate / verify
// over spec files, with JSON reports and CSV tail tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailbound/error.hpp"
#include "tailbound/loop/synth.hpp"
#include "tailbound/oracle.hpp"
#include "tailbound/prr/chain.hpp"
#include "tailbound/prr/synth.hpp"
#include "tailbound/report.hpp"
#include "tailbound/toml.hpp"

namespace tb = tailbound;

namespace {

struct run_config {
    std::string input;
    std::string json_path;
    std::string csv_path;
    std::uint64_t trials = 0; // 0 = per-model default
    std::uint64_t seed = 0;
    int B = -1;               // -1 = from file
    long long nstar = 0;      // 0 = from file
    long long n_max = 200;
    std::vector<std::string> kappas;
    std::string alpha_text;
    double tol = 1e-9;
};

void write_file(const std::string& path, const std::string& data) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) tb::raise(tb::errc::io_error, "cannot write '" + path + "'");
    out << data;
}

void emit_json(const run_config& cfg, const tb::report::ordered_json& j) {
    std::string text = j.dump(2) + "\n";
    if (cfg.json_path.empty())
        std::cout << text;
    else
        write_file(cfg.json_path, text);
}

bool is_loop_file(const tb::toml::document& doc) { return doc.find("loop") != nullptr; }

// "2.3^(1/nstar)" or a plain number; returns ln(alpha) for the given n*.
double parse_alpha_log(const std::string& text, long long nstar) {
    auto caret = text.find('^');
    if (caret == std::string::npos) {
        double a = std::strtod(text.c_str(), nullptr);
        if (a <= 1) tb::raise(tb::errc::domain_error, "alpha must exceed 1");
        return std::log(a);
    }
    double base = std::strtod(text.substr(0, caret).c_str(), nullptr);
    std::string expo = text.substr(caret + 1);
    if (expo == "(1/nstar)" || expo == "1/nstar") {
        if (nstar < 1) tb::raise(tb::errc::domain_error, "alpha references nstar but nstar is not set");
        return std::log(base) / double(nstar);
    }
    if (expo == "(1/(nstar*ln(nstar)))") {
        if (nstar < 2) tb::raise(tb::errc::domain_error, "nstar too small for n*ln(n*) exponent");
        return std::log(base) / (double(nstar) * std::log(double(nstar)));
    }
    tb::raise(tb::errc::syntax_error, "unsupported alpha form '" + text + "'");
}

tb::prr::prr_spec load_prr(const run_config& cfg) {
    tb::toml::document doc = tb::toml::parse_file(cfg.input);
    tb::prr::prr_spec spec = tb::prr::parse_prr_spec(doc);
    if (cfg.nstar > 0) spec.nstar = cfg.nstar;
    if (cfg.B >= 0) spec.partition_count = cfg.B;
    return spec;
}

std::vector<double> kappa_values_prr(const run_config& cfg, const tb::prr::prr_spec& spec,
                                     std::vector<tb::linlog_expr>* exprs_out) {
    std::vector<tb::linlog_expr> exprs;
    if (cfg.kappas.empty())
        exprs.push_back(spec.kappa);
    else
        for (const auto& k : cfg.kappas) exprs.push_back(tb::parse_linlog(k));
    std::vector<double> vals;
    for (const auto& e : exprs)
        vals.push_back(tb::eval_linlog(e, double(spec.nstar), tb::zero_convention::allow));
    if (exprs_out) *exprs_out = exprs;
    return vals;
}

int cmd_analyze_prr(const run_config& cfg) {
    tb::prr::prr_spec spec = load_prr(cfg);
    tb::prr::prr_bound bound = tb::prr::derive_bound(spec);
    emit_json(cfg, tb::report::prr_report(spec, bound));
    return bound.trivial ? 2 : 0;
}

int cmd_analyze_loop(const run_config& cfg) {
    tb::toml::document doc = tb::toml::parse_file(cfg.input);
    tb::loop::loop_spec spec = tb::loop::parse_loop_spec(doc);
    std::vector<double> kappas;
    for (const auto& k : cfg.kappas) kappas.push_back(std::strtod(k.c_str(), nullptr));
    try {
        tb::loop::loop_bound bound = tb::loop::derive_loop_bound(spec);
        emit_json(cfg, tb::report::loop_report(spec, bound, kappas, nullptr));
        return 0;
    } catch (const tb::error& e) {
        if (e.code() != tb::errc::infeasible) throw;
        emit_json(cfg, tb::report::loop_infeasible_report(spec, e.what()));
        return 2;
    }
}

int cmd_simulate(const run_config& cfg) {
    tb::toml::document doc = tb::toml::parse_file(cfg.input);
    std::string csv = tb::report::csv_header();
    bool any_fail = false;

    if (is_loop_file(doc)) {
        tb::loop::loop_spec spec = tb::loop::parse_loop_spec(doc);
        std::vector<double> kappas;
        for (const auto& k : cfg.kappas) kappas.push_back(std::strtod(k.c_str(), nullptr));
        if (kappas.empty()) tb::raise(tb::errc::domain_error, "simulate needs --kappa values");
        std::uint64_t trials = cfg.trials ? cfg.trials : 1000000;
        auto est = tb::oracle::estimate_tail(spec, kappas, trials, cfg.seed);
        std::optional<tb::loop::loop_bound> bound;
        try {
            bound = tb::loop::derive_loop_bound(spec);
        } catch (const tb::error&) {
        }
        for (size_t i = 0; i < kappas.size(); ++i) {
            double bv = bound ? bound->eval(kappas[i]) : 1.0;
            auto verdict = tb::oracle::check_dominance(bv, est[i]);
            any_fail |= verdict == tb::oracle::dominance::FAIL;
            csv += tb::report::csv_row(kappas[i], bv, est[i], verdict);
        }
    } else {
        tb::prr::prr_spec spec = load_prr(cfg);
        if (spec.symbolic_nstar())
            tb::raise(tb::errc::domain_error, "simulate needs a concrete nstar");
        std::vector<tb::linlog_expr> kexprs;
        std::vector<double> kappas = kappa_values_prr(cfg, spec, &kexprs);
        std::uint64_t trials = cfg.trials ? cfg.trials : 100000;
        auto est = tb::oracle::estimate_tail(spec, spec.nstar, kappas, trials, cfg.seed);
        tb::prr::prr_bound bound = tb::prr::derive_bound(spec);
        for (size_t i = 0; i < kappas.size(); ++i) {
            double bv = 1.0;
            if (!bound.trivial) {
                double fv = tb::eval_linlog(spec.f, double(spec.nstar));
                bv = kappas[i] >= fv ? tb::prr::eval_bound(bound, kexprs[i], spec.nstar) : 1.0;
            }
            auto verdict = tb::oracle::check_dominance(bv, est[i]);
            any_fail |= verdict == tb::oracle::dominance::FAIL;
            csv += tb::report::csv_row(kappas[i], bv, est[i], verdict);
        }
    }
    if (cfg.csv_path.empty())
        std::cout << csv;
    else
        write_file(cfg.csv_path, csv);
    return any_fail ? 2 : 0;
}

int cmd_verify(const run_config& cfg) {
    tb::prr::prr_spec spec = load_prr(cfg);
    if (cfg.alpha_text.empty())
        tb::raise(tb::errc::domain_error, "verify needs --alpha");
    long long nstar = spec.symbolic_nstar() ? cfg.n_max : spec.nstar;
    double log_alpha = parse_alpha_log(cfg.alpha_text, nstar);
    tb::prr::verify_result res =
        tb::prr::verify_condition_numeric(spec, log_alpha, cfg.n_max);
    tb::report::ordered_json j;
    j["name"] = spec.name;
    j["alpha"] = cfg.alpha_text;
    j["n_max"] = cfg.n_max;
    j["holds"] = res.holds;
    j["worst_margin"] = res.worst_margin;
    if (!res.holds) j["first_violation"] = res.first_violation;
    if (res.holds && !spec.kappa.is_zero() && !spec.symbolic_nstar()) {
        // evaluate the certified tail bound alpha^(f - kappa) at nstar
        double fv = tb::eval_linlog(spec.f, double(spec.nstar));
        double kv = tb::eval_linlog(spec.kappa, double(spec.nstar));
        if (kv >= fv) {
            j["bound_value"] = std::exp((fv - kv) * parse_alpha_log(cfg.alpha_text, spec.nstar));
            auto caret = cfg.alpha_text.find('^');
            if (caret != std::string::npos) {
                double base = std::strtod(cfg.alpha_text.substr(0, caret).c_str(), nullptr);
                std::string fam =
                    tb::report::power_family_formula(base, spec.f, spec.kappa, tb::basis::N);
                if (!fam.empty()) j["bound_formula"] = fam;
            }
        }
    }
    emit_json(cfg, j);
    return res.holds ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential tail-bound synthesis for probabilistic recurrences and loops"};
    app.require_subcommand(1);

    run_config cfg;
    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input) sub->add_option("input", cfg.input, "spec file (TOML subset)")->required();
        sub->add_option("--json", cfg.json_path, "write the JSON report here");
        sub->add_option("--csv", cfg.csv_path, "write the CSV table here");
        sub->add_option("--seed", cfg.seed, "simulation seed (default 0)");
        sub->add_option("--trials", cfg.trials, "Monte Carlo trials")
            ->check(CLI::PositiveNumber);
        sub->add_option("--B", cfg.B, "partition count override");
        sub->add_option("--nstar", cfg.nstar, "initial instance size override");
        sub->add_option("--nmax", cfg.n_max, "verify up to this n");
        sub->add_option("--kappa", cfg.kappas, "tail threshold (expression for PRRs)");
        sub->add_option("--tol", cfg.tol, "tolerance override");
    };

    CLI::App* a_prr = app.add_subcommand("analyze-prr", "synthesize a PRR concentration bound");
    add_common(a_prr, true);
    CLI::App* a_loop = app.add_subcommand("analyze-loop", "synthesize a loop concentration bound");
    add_common(a_loop, true);
    CLI::App* a_sim = app.add_subcommand("simulate", "Monte Carlo tails with dominance verdicts");
    add_common(a_sim, true);
    CLI::App* a_ver = app.add_subcommand("verify", "check the supermartingale inequality numerically");
    add_common(a_ver, true);
    a_ver->add_option("--alpha", cfg.alpha_text, "alpha value or closed form like 2.3^(1/nstar)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(a_prr)) return cmd_analyze_prr(cfg);
        if (app.got_subcommand(a_loop)) return cmd_analyze_loop(cfg);
        if (app.got_subcommand(a_sim)) return cmd_simulate(cfg);
        if (app.got_subcommand(a_ver)) return cmd_verify(cfg);
    } catch (const tb::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
