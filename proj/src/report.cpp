#include "tailbound/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tailbound::report {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string power_family_formula(double base, const linlog_expr& f, const linlog_expr& kappa,
                                 basis g) {
    linlog_expr diff = kappa - f; // bound = base^(-(diff/g)(n*))
    double k1 = to_double(diff.coef(basis::N_LN_N));
    double k2 = to_double(diff.coef(basis::N));
    double klog = to_double(diff.coef(basis::LN_N));
    double k0 = to_double(diff.coef(basis::CONST));
    std::ostringstream os;
    if (g == basis::N) {
        if (klog != 0 || k0 != 0) return "";
        os << "(" << num(base) << ")^(";
        bool first = true;
        if (k1 != 0) {
            os << "-" << num(k1) << "*ln(n*)";
            first = false;
        }
        if (k2 != 0) {
            os << (first ? "-" : " - ") << num(k2);
            first = false;
        }
        if (first) os << "0";
        os << ")";
        return os.str();
    }
    if (g == basis::N_LN_N) {
        if (klog != 0 || k0 != 0 || k2 != 0) return "";
        os << "(" << num(base) << ")^(-" << num(k1) << ")";
        return os.str();
    }
    if (g == basis::CONST) { // POWER strategy: alpha = base itself
        if (k1 != 0 || k2 != 0 || k0 != 0) return "";
        os << "(n*)^(-" << num(klog * std::log(base)) << ")";
        return os.str();
    }
    return "";
}

ordered_json prr_report(const prr::prr_spec& spec, const prr::prr_bound& bound) {
    ordered_json j;
    j["name"] = spec.name;
    j["f"] = print_linlog(spec.f);
    j["kappa"] = print_linlog(spec.kappa);
    if (spec.symbolic_nstar())
        j["nstar"] = "symbolic";
    else
        j["nstar"] = spec.nstar;
    j["B_used"] = bound.B_used;
    if (!bound.trivial) {
        j["cstar"] = bound.cstar;
        ordered_json alpha;
        alpha["closed_form"] = bound.alpha_closed_form();
        if (!spec.symbolic_nstar()) alpha["value"] = std::exp(bound.log_alpha(spec.nstar));
        j["alpha"] = alpha;
        if (!spec.symbolic_nstar()) {
            j["bound_value"] = prr::eval_bound(bound, spec.kappa, spec.nstar);
            j["bound_log"] = prr::eval_bound_log(bound, spec.kappa, spec.nstar);
        } else {
            j["bound_value"] = nullptr;
        }
        std::string family = power_family_formula(bound.cstar, spec.f, spec.kappa, bound.g);
        if (family.empty())
            j["bound_formula"] = "alpha^(f(n*) - kappa(n*)) with alpha = " +
                                 bound.alpha_closed_form();
        else
            j["bound_formula"] = family;
    } else {
        j["cstar"] = nullptr;
        j["alpha"] = nullptr;
        j["bound_value"] = 1.0;
        j["bound_formula"] = "1";
        j["failure"] = bound.status_detail;
    }
    ordered_json trace = ordered_json::array();
    for (const auto& st : bound.stages) {
        ordered_json e;
        e["stage"] = st.stage;
        e["text"] = st.text;
        trace.push_back(e);
    }
    for (const auto& st : bound.trace.steps) {
        ordered_json e;
        e["stage"] = "separability";
        e["rule"] = prr::sep_rule_name(st.rule);
        e["expr"] = st.expr;
        e["verdict"] = st.verdict;
        trace.push_back(e);
    }
    j["trace"] = trace;
    j["status"] = bound.trivial ? "TRIVIAL" : "BOUND";
    return j;
}

ordered_json loop_report(const loop::loop_spec& spec, const loop::loop_bound& bound,
                         const std::vector<double>& kappas,
                         const std::vector<oracle::tail_estimate>* estimates) {
    ordered_json j;
    j["name"] = spec.name;
    ordered_json eta;
    ordered_json coeffs;
    for (size_t i = 0; i < spec.vars.size(); ++i)
        coeffs[spec.vars[i]] = to_double(bound.eta.coefficients[i]);
    eta["coeffs"] = coeffs;
    eta["offset"] = to_double(bound.eta.offset);
    j["eta"] = eta;
    j["K"] = bound.eta.k_floor;
    j["alpha"] = bound.alpha;
    j["beta"] = bound.beta;
    if (bound.beta_capped) j["beta_capped"] = true;
    j["bound_formula"] = "min(1, " + num(bound.alpha) + "^(" + num(bound.eta_init) + " - (" +
                         num(bound.eta.k_floor) + ")) * " + num(bound.beta) + "^(-kappa))";
    ordered_json evals = ordered_json::array();
    for (size_t i = 0; i < kappas.size(); ++i) {
        ordered_json e;
        e["kappa"] = kappas[i];
        e["bound"] = bound.eval(kappas[i]);
        if (estimates && i < estimates->size()) {
            e["empirical"] = (*estimates)[i].point;
            e["ci_upper"] = (*estimates)[i].wilson_upper_99;
        }
        evals.push_back(e);
    }
    j["evaluations"] = evals;
    ordered_json residuals;
    residuals["max_branch_residual"] = bound.max_branch_residual;
    residuals["eta_init"] = bound.eta_init;
    j["residuals"] = residuals;
    j["status"] = "BOUND";
    return j;
}

ordered_json loop_infeasible_report(const loop::loop_spec& spec, const std::string& reason) {
    ordered_json j;
    j["name"] = spec.name;
    j["status"] = "INFEASIBLE";
    j["reason"] = reason;
    return j;
}

std::string csv_header() { return "kappa,bound,empirical,wilson_upper_99,verdict\n"; }

std::string csv_row(double kappa, double bound, const oracle::tail_estimate& est,
                    oracle::dominance verdict) {
    std::ostringstream os;
    os << num(kappa) << "," << num(bound) << "," << num(est.point) << ","
       << num(est.wilson_upper_99) << "," << oracle::dominance_name(verdict) << "\n";
    return os.str();
}

} // namespace tailbound::report
