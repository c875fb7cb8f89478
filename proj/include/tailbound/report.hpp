#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tailbound/loop/synth.hpp"
#include "tailbound/oracle.hpp"
#include "tailbound/prr/synth.hpp"

namespace tailbound::report {

using ordered_json = nlohmann::ordered_json;

// {name, f, kappa, nstar, B_used, cstar, alpha, bound_value, bound_formula,
//  trace, status}
ordered_json prr_report(const prr::prr_spec& spec, const prr::prr_bound& bound);

// {eta, K, alpha, beta, bound_formula, evaluations, residuals, status}
ordered_json loop_report(const loop::loop_spec& spec, const loop::loop_bound& bound,
                         const std::vector<double>& kappas,
                         const std::vector<oracle::tail_estimate>* estimates);

ordered_json loop_infeasible_report(const loop::loop_spec& spec, const std::string& reason);

// Closed-form string like "(2.3)^(-2*ln(n*) - 12)" for a bound
// base^(1/g(n*)) raised to f(n*) - kappa(n*); empty when the pattern does
// not apply.
std::string power_family_formula(double base, const linlog_expr& f, const linlog_expr& kappa,
                                 basis g);

std::string csv_header();
std::string csv_row(double kappa, double bound, const oracle::tail_estimate& est,
                    oracle::dominance verdict);

} // namespace tailbound::report
