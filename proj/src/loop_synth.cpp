#include "tailbound/loop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailbound/simplex.hpp"

namespace tailbound::loop {

namespace {

constexpr double kBetaCap = 1048576.0;      // 2^20
constexpr double kCoefBox = 1000000.0;      // |coefficient| box in the LP
constexpr double kBetaRelTol = 1e-8;

double dist_expectation(const discrete_dist& d) {
    rational e = 0;
    for (const auto& a : d.atoms) e += a.value * a.prob;
    return to_double(e);
}

// g_b(alpha) = sum p * alpha^v in log-stable form
double g_of_alpha(const discrete_dist& d, double alpha) {
    double la = std::log(alpha);
    double out = 0;
    for (const auto& a : d.atoms) out += to_double(a.prob) * std::exp(to_double(a.value) * la);
    return out;
}

double g_derivative(const discrete_dist& d, double alpha) {
    double la = std::log(alpha);
    double out = 0;
    for (const auto& a : d.atoms) {
        double v = to_double(a.value);
        out += to_double(a.prob) * v * std::exp((v - 1) * la);
    }
    return out;
}

// Location of the interior minimum of the convex g_b, or +inf when g_b is
// decreasing throughout (all exponents <= 0).
double argmin_g(const discrete_dist& d) {
    bool has_pos = false;
    for (const auto& a : d.atoms) has_pos |= a.value > 0;
    if (!has_pos) return std::numeric_limits<double>::infinity();
    double lo = 1.0, hi = 2.0;
    while (g_derivative(d, hi) < 0 && hi < 1e12) hi *= 2;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (g_derivative(d, mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double rsm_map::eval(const std::vector<rational>& x) const {
    rational v = offset;
    for (size_t i = 0; i < coefficients.size(); ++i) v += coefficients[i] * x[i];
    return to_double(v);
}

rsm_map synthesize_rsm(const loop_spec& spec) {
    const int nv = static_cast<int>(spec.vars.size());
    const int ng = static_cast<int>(spec.guard.size());
    // variables: coefficients c (nv), offset d, Farkas multipliers lambda (ng)
    const int N = nv + 1 + ng;
    lp_problem lp;
    lp.nvars = N;
    lp.objective.assign(N, 0);
    for (int i = 0; i < nv; ++i) lp.objective[i] = spec.init[static_cast<size_t>(i)];
    lp.objective[nv] = 1;

    auto row = [&](std::initializer_list<std::pair<int, rational>> entries) {
        std::vector<rational> r(N, 0);
        for (const auto& [idx, v] : entries) r[static_cast<size_t>(idx)] = v;
        return r;
    };

    // (B1) via Farkas: c = -A^T lambda, d >= lambda.b, lambda >= 0
    for (int j = 0; j < nv; ++j) {
        std::vector<rational> r(N, 0);
        r[static_cast<size_t>(j)] = 1;
        for (int i = 0; i < ng; ++i)
            r[static_cast<size_t>(nv + 1 + i)] = spec.guard[static_cast<size_t>(i)].coef[static_cast<size_t>(j)];
        lp.add_eq(std::move(r), 0);
    }
    {
        std::vector<rational> r(N, 0);
        r[static_cast<size_t>(nv)] = -1;
        for (int i = 0; i < ng; ++i)
            r[static_cast<size_t>(nv + 1 + i)] = spec.guard[static_cast<size_t>(i)].bound;
        lp.add_le(std::move(r), 0); // lambda.b - d <= 0
    }
    for (int i = 0; i < ng; ++i)
        lp.add_le(row({{nv + 1 + i, -1}}), 0); // lambda_i >= 0

    // (B3): c . E[delta_b] <= -1 per branch (x-free by incrementality)
    for (const auto& b : spec.branches) {
        std::vector<rational> edelta(static_cast<size_t>(nv), 0);
        for (const auto& st : b.steps)
            for (int j = 0; j < nv; ++j)
                edelta[static_cast<size_t>(j)] += st.prob * st.delta[static_cast<size_t>(j)];
        std::vector<rational> r(N, 0);
        for (int j = 0; j < nv; ++j) r[static_cast<size_t>(j)] = edelta[static_cast<size_t>(j)];
        lp.add_le(std::move(r), -1);
    }

    // coefficient box
    rational box(static_cast<long long>(kCoefBox));
    for (int j = 0; j <= nv; ++j) {
        lp.add_le(row({{j, 1}}), box);
        lp.add_le(row({{j, -1}}), box);
    }

    lp_solution sol = solve_lp(lp);
    if (!sol.feasible)
        raise(errc::infeasible, "no linear RSM certificate exists for this loop");
    if (!sol.bounded)
        raise(errc::infeasible, "RSM objective unbounded (guard admits arbitrarily negative eta(init))");

    rsm_map eta;
    eta.coefficients.assign(sol.x.begin(), sol.x.begin() + nv);
    eta.offset = sol.x[static_cast<size_t>(nv)];

    // K = min(0, min over branch-support deltas of <eta, delta>); sound since
    // eta >= 0 on the guard.
    double kfloor = 0;
    for (const auto& b : spec.branches)
        for (const auto& st : b.steps) {
            rational v = 0;
            for (size_t i = 0; i < st.delta.size(); ++i) v += eta.coefficients[i] * st.delta[i];
            kfloor = std::min(kfloor, to_double(v));
        }
    eta.k_floor = kfloor;
    return eta;
}

std::optional<double> min_alpha_for_beta(const std::vector<discrete_dist>& projections,
                                         double beta) {
    if (beta <= 1) raise(errc::domain_error, "beta must exceed 1");
    double alpha = 1.0;
    for (const auto& d : projections) {
        double target = 1.0 / beta;
        double lo = 1.0;
        double hi = argmin_g(d);
        bool unbounded_right = std::isinf(hi);
        if (unbounded_right) {
            hi = 2.0;
            while (g_of_alpha(d, hi) > target && hi < 1e15) hi *= 2;
            if (g_of_alpha(d, hi) > target) return std::nullopt;
        } else if (g_of_alpha(d, hi) > target) {
            return std::nullopt; // even the minimum misses the target
        }
        // minimal root: g decreasing on [1, argmin]
        for (int i = 0; i < 300 && hi - lo > 1e-14 * hi; ++i) {
            double mid = 0.5 * (lo + hi);
            (g_of_alpha(d, mid) > target ? lo : hi) = mid;
        }
        alpha = std::max(alpha, hi); // hi side satisfies beta*g <= 1
    }
    // joint feasibility at the max of the per-branch minimal roots
    for (const auto& d : projections)
        if (beta * g_of_alpha(d, alpha) > 1.0 + 1e-9) return std::nullopt;
    return alpha;
}

beta_alpha search_beta_alpha(const loop_spec& spec, const rsm_map& eta) {
    std::vector<discrete_dist> proj = branch_delta_projection(spec, eta.coefficients);
    for (const auto& d : proj) {
        double drift = dist_expectation(d);
        if (drift > -1 + 1e-12)
            raise(errc::infeasible, "projected drift above -1; eta is not an RSM");
    }

    // analytic seed: beta can never exceed 1 / max_b min_alpha g_b
    double beta_cap = kBetaCap;
    for (const auto& d : proj) {
        double am = argmin_g(d);
        if (!std::isinf(am)) beta_cap = std::min(beta_cap, 1.0 / g_of_alpha(d, am));
    }

    beta_alpha out;
    if (min_alpha_for_beta(proj, beta_cap).has_value()) {
        out.beta = beta_cap;
        out.beta_capped = beta_cap == kBetaCap;
    } else {
        double lo = 1.0 + 1e-9, hi = beta_cap;
        if (!min_alpha_for_beta(proj, lo).has_value())
            raise(errc::infeasible, "no beta above 1 is feasible");
        for (int i = 0; i < 300 && hi - lo > kBetaRelTol * hi; ++i) {
            double mid = 0.5 * (lo + hi);
            (min_alpha_for_beta(proj, mid).has_value() ? lo : hi) = mid;
        }
        out.beta = lo;
    }
    out.alpha = *min_alpha_for_beta(proj, out.beta);
    return out;
}

double loop_bound::eval_log(double kappa) const {
    double lg = (eta_init - eta.k_floor) * std::log(alpha) - kappa * std::log(beta);
    return std::min(0.0, lg);
}

double loop_bound::eval(double kappa) const { return std::exp(eval_log(kappa)); }

loop_bound derive_loop_bound(const loop_spec& spec) {
    loop_bound b;
    b.eta = synthesize_rsm(spec);
    beta_alpha ba = search_beta_alpha(spec, b.eta);
    b.alpha = ba.alpha;
    b.beta = ba.beta;
    b.beta_capped = ba.beta_capped;
    b.eta_init = b.eta.eval(spec.init);

    // certificate residuals before emitting anything
    std::vector<discrete_dist> proj = branch_delta_projection(spec, b.eta.coefficients);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& d : proj)
        worst = std::max(worst, b.beta * g_of_alpha(d, b.alpha) - 1.0);
    b.max_branch_residual = worst;
    if (worst > 1e-9)
        raise(errc::residual_check_failed, "beta * g_b(alpha) exceeds 1 beyond tolerance");
    if (b.alpha <= 1 || b.beta <= 1)
        raise(errc::residual_check_failed, "alpha/beta must exceed 1");
    if (b.eta_init < -1e-12 && spec.in_guard(spec.init))
        raise(errc::residual_check_failed, "eta negative at the initial valuation");
    return b;
}

} // namespace tailbound::loop
