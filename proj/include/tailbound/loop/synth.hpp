#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailbound/loop/spec.hpp"

namespace tailbound::loop {

// Linear ranking-supermartingale map eta(x) = coef.x + offset with the
// per-step decrease fixed to 1 and the post-step floor K <= 0.
struct rsm_map {
    std::vector<rational> coefficients;
    rational offset = 0;
    double k_floor = 0; // K

    double eval(const std::vector<rational>& x) const;
};

// Farkas-certified eta >= 0 on the guard, expected one-step change <= -1 on
// every branch, objective minimize eta(init). Errors: Infeasible.
rsm_map synthesize_rsm(const loop_spec& spec);

// Per branch g_b(a) = sum p * a^{delta_eta}; the condition is
// beta * g_b(alpha) <= 1. Returns the smallest feasible alpha across
// branches, or nothing when some branch admits no alpha at this beta.
std::optional<double> min_alpha_for_beta(const std::vector<discrete_dist>& projections,
                                         double beta);

struct beta_alpha {
    double beta = 1;
    double alpha = 1;
    bool beta_capped = false; // deterministic loops: search stops at the cap
};

// Binary search for the largest feasible beta (feasibility is monotone),
// then the minimal alpha at that beta.
beta_alpha search_beta_alpha(const loop_spec& spec, const rsm_map& eta);

struct loop_bound {
    rsm_map eta;
    double alpha = 1;
    double beta = 1;
    bool beta_capped = false;
    double eta_init = 0;
    double max_branch_residual = 0; // max over branches of beta*g_b(alpha) - 1

    // Pr(T >= kappa) <= alpha^(eta(init) - K) * beta^(-kappa), clamped to 1
    double eval(double kappa) const;
    double eval_log(double kappa) const;
};

// Composes synthesis and the beta/alpha search; re-checks the emitted
// certificate ((A1)-(A3) residuals) before returning.
// Errors: Infeasible, ResidualCheckFailed.
loop_bound derive_loop_bound(const loop_spec& spec);

} // namespace tailbound::loop
