#pragma once

#include <string>
#include <vector>

#include "tailbound/linlog.hpp"
#include "tailbound/prr/spec.hpp"
#include "tailbound/psi.hpp"

namespace tailbound::prr {

// Rewriting strategy, selected by the most significant term of f:
//   GEOMETRIC: f = q*n (+ const)      -> geometric-series integral
//   POWER:     f = q*ln(n) (+ const)  -> power-function integral; the
//              n-dependence cancels and the final inequality is in alpha
//   BLOCKS:    f = q*n*ln(n)          -> B-block max over-approximation
enum class strategy_kind { GEOMETRIC, POWER, BLOCKS };

const char* strategy_name(strategy_kind s);

// Symbolic inequality alpha^f(n) >= alpha^a(n) * E[alpha^f(h(n))] with the
// expectation written as explicit (1/n)-weighted range sums, quantified over
// the instance sizes up to n*. After overapprox_sums the right side is
// sum-free and `strategy`/`blocks` say which closed form replaced the sums.
struct condition_expr {
    linlog_expr f;
    linlog_expr toll;
    rational gamma;    // weight of the halfsplit pair; 1-gamma on the uniform sum
    long long nstar = kSymbolicNStar;
    int ell = 1;       // 2 only on the twocall over-approximation path

    bool sum_free = false;
    strategy_kind strategy = strategy_kind::GEOMETRIC;
    int blocks = 0;

    std::string text; // printed inequality for the derivation trace
};

// Step 1. Errors: UnsupportedShape for TWOCALL_SPLIT (verify mode only).
condition_expr gen_condition(const prr_spec& spec);

// Step 2: replaces every summation by an over-approximation (integral when
// the summand has an elementary antiderivative, otherwise B max-blocks),
// removing floors/ceilings; the result is a strictly stronger condition.
condition_expr overapprox_sums(const condition_expr& cond, int B);

// Step 3: substitutes c := alpha^g(n), multiplies out positive denominators,
// applies the sound term-dropping rules and divides by the common c-power.
// Errors: NotReducible when residual n-dependence falls outside the admitted
// patterns.
psi_expr substitute_simplify(const condition_expr& cond, basis g);

// Twocall-shape condition for the over-approximation/test path (the synthesis
// pipeline proper rejects twocall in gen_condition).
condition_expr gen_condition_twocall(const prr_spec& spec);

// --- Separability (Step 4) ---

enum class sep_rule { EVAL_AT_ONE, STRICT_DECREASING, RECURSE_DERIVATIVE, SIMPLIFY_DIVIDE };

const char* sep_rule_name(sep_rule r);

struct sep_step {
    std::string expr;
    sep_rule rule;
    std::string verdict;
};

struct separability_trace {
    std::vector<sep_step> steps;
    bool success = false;
};

// Recursive proof that psi is separable: nonnegative on [1, c*], negative
// beyond. FAIL is a verdict, not an error.
separability_trace prove_separable(const psi_expr& psi);

struct cstar_result {
    double value = 1;
    double bracket_lo = 1;
    double bracket_hi = 1;
    bool capped = false;
};

// Binary search for c* using psi(c) < 0 <=> c > c*; bracket to relative
// width 1e-6, doubling cap 2^60 (the cap is returned if psi never goes
// negative; any feasible c works and larger is better).
cstar_result find_cstar(const psi_expr& psi, const separability_trace& trace);

// Step 5: largest alpha with alpha^g(1) > 1 and alpha^g(n*) <= c*; for
// g = CONST the constraint is on alpha itself. Errors: TrivialBound for
// cstar <= 1.
double solve_alpha(double cstar, basis g, long long nstar);

// --- Assembled bound ---

struct stage_record {
    std::string stage;
    std::string text;
};

struct prr_bound {
    bool trivial = true;
    std::string status_detail; // failure reason when trivial
    std::string name;
    linlog_expr f, kappa, toll;
    long long nstar = kSymbolicNStar;
    strategy_kind strategy = strategy_kind::GEOMETRIC;
    basis g = basis::N;        // substitution basis; CONST solve semantics for POWER
    int B_used = 0;
    double cstar = 1;
    cstar_result cstar_bracket;
    psi_expr psi;
    separability_trace trace;
    std::vector<stage_record> stages;

    // ln(alpha) for a concrete n*; for POWER the value is n*-free
    double log_alpha(long long nstar_value) const;
    std::string alpha_closed_form() const;
};

// Runs Steps 1-5. Failures produce the trivial bound 1 with the reason
// recorded; when spec.B == 0 the BLOCKS strategy retries B = 2,4,...,64.
prr_bound derive_bound(const prr_spec& spec);

// alpha^(f(n*) - kappa(n*)) in log domain. Errors: KappaBelowF.
double eval_bound(const prr_bound& bound, const linlog_expr& kappa, long long nstar);
double eval_bound_log(const prr_bound& bound, const linlog_expr& kappa, long long nstar);

// Direct numeric check of the supermartingale inequality for every
// n in {2..n_max} against the exact child distribution, in log domain.
struct verify_result {
    bool holds = false;
    long long first_violation = 0; // valid when !holds
    double worst_margin = 0;       // min over n of lhs - rhs (log domain)
};
verify_result verify_condition_numeric(const prr_spec& spec, double log_alpha, long long n_max);

} // namespace tailbound::prr
