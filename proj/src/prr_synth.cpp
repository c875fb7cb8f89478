#include "tailbound/prr/synth.hpp"

#include <algorithm>
#include <utility>
#include <cmath>
#include <limits>
#include <sstream>

namespace tailbound::prr {

namespace {

constexpr double kCstarCap = 1152921504606846976.0; // 2^60
constexpr double kLn2 = 0.6931471805599453;

double rat(const rational& q) { return to_double(q); }

std::string gamma_str(const rational& g) {
    if (denominator(g) == 1) return rational_str(g);
    return std::to_string(to_double(g));
}

std::string exp_str(const linlog_expr& e) { return "alpha^(" + print_linlog(e) + ")"; }

} // namespace

const char* strategy_name(strategy_kind s) {
    switch (s) {
    case strategy_kind::GEOMETRIC: return "geometric";
    case strategy_kind::POWER: return "power";
    case strategy_kind::BLOCKS: return "blocks";
    }
    return "?";
}

const char* sep_rule_name(sep_rule r) {
    switch (r) {
    case sep_rule::EVAL_AT_ONE: return "EVAL_AT_ONE";
    case sep_rule::STRICT_DECREASING: return "STRICT_DECREASING";
    case sep_rule::RECURSE_DERIVATIVE: return "RECURSE_DERIVATIVE";
    case sep_rule::SIMPLIFY_DIVIDE: return "SIMPLIFY_DIVIDE";
    }
    return "?";
}

condition_expr gen_condition(const prr_spec& spec) {
    if (spec.shape.kind == shape_kind::TWOCALL_SPLIT)
        raise(errc::unsupported_shape, "twocall_split is supported in verify mode only");
    condition_expr c;
    c.f = spec.f;
    c.toll = spec.toll;
    c.gamma = spec.shape.halfsplit_weight();
    c.nstar = spec.nstar;
    c.ell = 1;

    std::ostringstream os;
    os << "forall 1 <= n <= n*, " << exp_str(c.f) << " >= " << exp_str(c.toll) << " * ";
    bool mixed = c.gamma != 0 && c.gamma != 1;
    std::string half = "(sum_{i=ceil(n/2)}^{n-1} alpha^f(i) + sum_{i=floor(n/2)}^{n-1} alpha^f(i))";
    std::string unif = "sum_{i=0}^{n-1} alpha^f(i)";
    if (mixed)
        os << "((" << gamma_str(c.gamma) << "/n) * " << half << " + ("
           << gamma_str(1 - c.gamma) << "/n) * " << unif << ")";
    else if (c.gamma == 1)
        os << "(1/n) * " << half;
    else
        os << "(1/n) * " << unif;
    c.text = os.str();
    return c;
}

condition_expr gen_condition_twocall(const prr_spec& spec) {
    if (spec.shape.kind != shape_kind::TWOCALL_SPLIT)
        raise(errc::unsupported_shape, "expected twocall_split");
    condition_expr c;
    c.f = spec.f;
    c.toll = spec.toll;
    c.gamma = 0;
    c.nstar = spec.nstar;
    c.ell = 2;
    c.text = "forall 1 <= n <= n*, " + exp_str(c.f) + " >= " + exp_str(c.toll) +
             " * (1/n) * sum_{i=0}^{n-1} alpha^(f(i) + f(n-1-i))";
    return c;
}

namespace {

struct f_shape {
    double q = 0;  // coefficient of the leading basis element
    double k0 = 0; // constant offset (divides out)
};

f_shape classify_f(const linlog_expr& f, strategy_kind strat) {
    f_shape s;
    s.k0 = rat(f.coef(basis::CONST));
    switch (strat) {
    case strategy_kind::GEOMETRIC:
        if (f.coef(basis::LN_N) != 0 || f.coef(basis::N_LN_N) != 0)
            raise(errc::not_reducible, "f mixes n with log terms");
        s.q = rat(f.coef(basis::N));
        break;
    case strategy_kind::POWER:
        s.q = rat(f.coef(basis::LN_N));
        break;
    case strategy_kind::BLOCKS:
        if (f.coef(basis::LN_N) != 0 || f.coef(basis::N) != 0 || f.coef(basis::CONST) != 0)
            raise(errc::not_reducible, "blocks strategy requires f = q*n*ln(n) exactly");
        s.q = rat(f.coef(basis::N_LN_N));
        break;
    }
    if (s.q <= 0) raise(errc::not_reducible, "nonpositive leading coefficient in f");
    return s;
}

} // namespace

condition_expr overapprox_sums(const condition_expr& cond, int B) {
    condition_expr out = cond;
    out.sum_free = true;

    if (cond.ell == 2) {
        // pairwise summand alpha^(f(i) + f(n-1-i)); monotone halves; B blocks
        // over the full range give B/2 distinct maxima by symmetry
        if (leading_term(cond.f) != basis::N_LN_N)
            raise(errc::not_reducible, "twocall over-approximation requires f = q*n*ln(n)");
        classify_f(cond.f, strategy_kind::BLOCKS);
        if (cond.toll.coef(basis::N_LN_N) != 0 || cond.toll.coef(basis::LN_N) != 0)
            raise(errc::not_reducible, "twocall toll outside k1*n + k2");
        if (B < 2 || B % 2 != 0) raise(errc::domain_error, "twocall blocks need even B >= 2");
        out.strategy = strategy_kind::BLOCKS;
        out.blocks = B;
        std::ostringstream os;
        os << "forall 1 <= n <= n*, " << exp_str(cond.f) << " >= " << exp_str(cond.toll)
           << " * (1/" << (B / 2) << ") * (";
        for (int j = 0; j < B / 2; ++j)
            os << (j ? " + " : "") << "alpha^(f(" << j << "*n/" << B << ") + f(" << (B - j)
               << "*n/" << B << "))";
        os << ")";
        out.text = os.str();
        return out;
    }

    basis g = leading_term(cond.f);
    switch (g) {
    case basis::N: {
        out.strategy = strategy_kind::GEOMETRIC;
        if (cond.toll.coef(basis::N_LN_N) != 0)
            raise(errc::not_reducible, "toll grows faster than f");
        f_shape fs = classify_f(cond.f, out.strategy);
        // sum_{i=l}^{n-1} alpha^(q*i) <= (alpha^(q*n) - alpha^(q*l)) / (q ln alpha),
        // then alpha^(q*ceil(n/2)) + alpha^(q*floor(n/2)) >= 2 alpha^(q*n/2)
        std::ostringstream os;
        os << "forall 1 <= n <= n*, " << exp_str(cond.f) << " >= " << exp_str(cond.toll) << " * (";
        bool first = true;
        if (cond.gamma != 0) {
            os << "(" << gamma_str(cond.gamma * 2) << "/n) * (alpha^(" << fs.q
               << "*n) - alpha^(" << fs.q / 2 << "*n))";
            first = false;
        }
        if (cond.gamma != 1) {
            if (!first) os << " + ";
            os << "(" << gamma_str(1 - cond.gamma) << "/n) * (alpha^(" << fs.q
               << "*n) - alpha^(" << fs.k0 << "))";
        }
        os << ") / (" << fs.q << "*ln(alpha))";
        out.text = os.str();
        return out;
    }
    case basis::LN_N: {
        out.strategy = strategy_kind::POWER;
        if (cond.toll.coef(basis::N) != 0 || cond.toll.coef(basis::LN_N) != 0 ||
            cond.toll.coef(basis::N_LN_N) != 0)
            raise(errc::not_reducible, "power strategy requires a constant toll");
        f_shape fs = classify_f(cond.f, out.strategy);
        std::ostringstream os;
        os << "forall 1 <= n <= n*, " << exp_str(cond.f) << " >= " << exp_str(cond.toll)
           << " * (";
        if (cond.gamma != 0)
            os << "(" << gamma_str(cond.gamma * 2) << "/n) * (n*alpha^(" << fs.q
               << "*ln(n)) - (n/2)*alpha^(" << fs.q << "*ln(n/2)))";
        if (cond.gamma != 1) {
            if (cond.gamma != 0) os << " + ";
            os << "(" << gamma_str(1 - cond.gamma) << "/n) * (n*alpha^(" << fs.q
               << "*ln(n)) + " << fs.q << "*ln(alpha))";
        }
        os << ") / (" << fs.q << "*ln(alpha) + 1)";
        out.text = os.str();
        return out;
    }
    case basis::N_LN_N: {
        out.strategy = strategy_kind::BLOCKS;
        if (B < 1) raise(errc::domain_error, "blocks strategy needs B >= 1");
        classify_f(cond.f, out.strategy);
        out.blocks = B;
        std::ostringstream os;
        os << "forall 1 <= n <= n*, " << exp_str(cond.f) << " >= " << exp_str(cond.toll)
           << " * (";
        if (cond.gamma != 0) {
            os << "(" << gamma_str(cond.gamma * 2) << "/" << B << ") * (";
            for (int i = 1; i <= B; ++i)
                os << (i > 1 ? " + " : "") << "alpha^f((" << (B + i) << "/" << 2 * B << ")*n)";
            os << ")";
        }
        if (cond.gamma != 1) {
            if (cond.gamma != 0) os << " + ";
            os << "(" << gamma_str(1 - cond.gamma) << "/" << 2 * B << ") * (";
            for (int j = 1; j <= 2 * B; ++j)
                os << (j > 1 ? " + " : "") << "alpha^f((" << j << "/" << 2 * B << ")*n)";
            os << ")";
        }
        os << ")";
        out.text = os.str();
        return out;
    }
    case basis::CONST:
        raise(errc::not_reducible, "constant f admits no nontrivial condition");
    }
    raise(errc::not_reducible, "unreachable");
}

namespace {

// sup over n >= 1 of (k2*ln n + k3)/n; the toll residual exponent after the
// c-substitution for the GEOMETRIC strategy. The grouped right-side terms
// are nonpositive, so rounding their shared toll factor up to this supremum
// only strengthens the condition.
double toll_residual_sup_geometric(double k2, double k3) {
    double best = std::max(k3, 0.0); // n = 1 and the n -> inf limit
    if (k2 > 0 && k3 <= k2) best = std::max(best, k2 * std::exp(k3 / k2 - 1.0));
    return best;
}

// sup over n >= 2 of (k2*n + k3*ln n + k4)/(n ln n) bounded by the sum of
// per-component suprema (BLOCKS strategy toll residual).
double toll_residual_sup_blocks(double k2, double k3, double k4) {
    return std::max(0.0, k2) / kLn2 + std::max(0.0, k3) / 2.0 +
           std::max(0.0, k4) / (2.0 * kLn2);
}

} // namespace

namespace {

// final Step-3 normalization: divide by the common (positive) c-power
psi_expr divide_common_power(psi_expr psi) {
    if (!psi.is_zero() && psi.terms().front().nu > 0) return psi_simplify_divide(psi);
    return psi;
}

} // namespace

psi_expr substitute_simplify(const condition_expr& cond, basis g) {
    if (!cond.sum_free) raise(errc::invariant_violation, "substitute_simplify before overapprox");
    double gamma = rat(cond.gamma);

    if (cond.ell == 2) {
        // c := alpha^n; the common alpha^(q n ln n) divides out of both sides,
        // leaving psi(c) = B/2 - sum_j c^(tollexp + q(1-x_j)ln(1-x_j)).
        double q = rat(cond.f.coef(basis::N_LN_N));
        double k2 = rat(cond.toll.coef(basis::N));
        double k4 = rat(cond.toll.coef(basis::CONST));
        double tollexp = k2 + std::max(0.0, k4); // sup over n >= 1 of (k2 n + k4)/n
        int B = cond.blocks;
        psi_expr psi = psi_expr::constant(B / 2);
        for (int j = 0; j < B / 2; ++j) {
            double x = double(j) / B;
            double h = (1 - x) * std::log(1 - x); // x ln x + ... with ln-majorized small part
            psi.add_term(-1.0, tollexp + q * h, 0);
        }
        return divide_common_power(std::move(psi));
    }

    switch (cond.strategy) {
    case strategy_kind::GEOMETRIC: {
        if (g != basis::N) raise(errc::not_reducible, "geometric strategy substitutes c := alpha^n");
        double q = rat(cond.f.coef(basis::N));
        double k1 = rat(cond.toll.coef(basis::N));
        double k2 = rat(cond.toll.coef(basis::LN_N));
        double k3 = rat(cond.toll.coef(basis::CONST));
        double delta = toll_residual_sup_geometric(k2, k3);
        // q c^q ln c - (1+gamma) c^(k1+q+d) + 2 gamma c^(k1+q/2+d) + (1-gamma) c^(k1+d)
        psi_expr psi;
        psi.add_term(q, q, 1);
        psi.add_term(-(1 + gamma), k1 + q + delta, 0);
        if (gamma != 0) psi.add_term(2 * gamma, k1 + q / 2 + delta, 0);
        if (gamma != 1) psi.add_term(1 - gamma, k1 + delta, 0);
        return divide_common_power(std::move(psi));
    }
    case strategy_kind::POWER: {
        if (g != basis::LN_N) raise(errc::not_reducible, "power strategy expects g = ln(n)");
        double q = rat(cond.f.coef(basis::LN_N));
        double k2 = rat(cond.toll.coef(basis::CONST));
        // variable is alpha itself: the n-powers cancel after integration
        psi_expr psi;
        psi.add_term(1, 0, 0);
        psi.add_term(q, 0, 1);
        if (gamma != 0) {
            psi.add_term(-2 * gamma, k2, 0);
            psi.add_term(gamma, k2 - q * kLn2, 0);
        }
        if (gamma != 1) {
            psi.add_term(-(1 - gamma), k2, 0);
            // the i = 0 element of the uniform sum, bounded via 1/n <= 1/2
            psi.add_term(-(1 - gamma) * q / 2, k2, 1);
        }
        return divide_common_power(std::move(psi));
    }
    case strategy_kind::BLOCKS: {
        if (g != basis::N_LN_N)
            raise(errc::not_reducible, "blocks strategy substitutes c := alpha^(n*ln(n))");
        double q = rat(cond.f.coef(basis::N_LN_N));
        double k1 = rat(cond.toll.coef(basis::N_LN_N));
        double delta = toll_residual_sup_blocks(rat(cond.toll.coef(basis::N)),
                                                rat(cond.toll.coef(basis::LN_N)),
                                                rat(cond.toll.coef(basis::CONST)));
        int B = cond.blocks;
        psi_expr psi;
        psi.add_term(1, q, 0);
        if (gamma != 0) {
            for (int i = 1; i <= B; ++i) {
                double x = double(B + i) / (2 * B);
                psi.add_term(-2 * gamma / B, k1 + q * x + delta, 0);
            }
        }
        if (gamma != 1) {
            for (int j = 1; j <= 2 * B; ++j) {
                double x = double(j) / (2 * B);
                psi.add_term(-(1 - gamma) / (2 * B), k1 + q * x + delta, 0);
            }
        }
        return divide_common_power(std::move(psi));
    }
    }
    raise(errc::not_reducible, "unreachable");
}

namespace {

bool all_coefficients_negative(const psi_expr& p) {
    if (p.is_zero()) return false;
    for (const auto& t : p.terms())
        if (t.mu >= 0) return false;
    return true;
}

int term_budget(const psi_expr& p) {
    int s = static_cast<int>(p.size());
    int l = 0;
    for (const auto& t : p.terms())
        if (t.xi != 0) ++l;
    return s + l;
}

void record(separability_trace& tr, const psi_expr& p, sep_rule rule, std::string verdict) {
    tr.steps.push_back({print_psi(p), rule, std::move(verdict)});
}

psi_expr simplify_with_trace(const psi_expr& p, separability_trace& tr) {
    if (p.is_zero()) return p;
    if (p.terms().front().nu == 0) return p; // already has minimal exponent 0
    psi_expr s = psi_simplify_divide(p);
    record(tr, s, sep_rule::SIMPLIFY_DIVIDE, "divided by the minimal c-power");
    return s;
}

// True iff the simplified argument is strictly decreasing on [1, inf) or
// everywhere negative beyond 1 (all-coefficient-negative case). Either way
// its sign, combined with the value at 1, determines the sign on (1, inf).
bool mono_dec(const psi_expr& raw, separability_trace& tr, int budget) {
    if (raw.is_zero() || budget < 0) return false;
    psi_expr p = simplify_with_trace(raw, tr);
    if (all_coefficients_negative(p)) {
        record(tr, p, sep_rule::STRICT_DECREASING, "all coefficients negative");
        return true;
    }
    psi_expr d = psi_derive(p);
    if (d.is_zero()) return false; // positive constant
    double d1 = psi_at_one(d);
    if (d1 < 0 && mono_dec(d, tr, budget - 1)) {
        record(tr, p, sep_rule::STRICT_DECREASING,
               "derivative negative at 1 and decreasing beyond");
        return true;
    }
    return false;
}

bool prove_rec(const psi_expr& raw, separability_trace& tr, int budget) {
    if (budget < 0) {
        record(tr, raw, sep_rule::RECURSE_DERIVATIVE, "FAIL: recursion budget exceeded");
        return false;
    }
    if (raw.is_zero()) {
        record(tr, raw, sep_rule::EVAL_AT_ONE, "identically zero");
        return true;
    }
    psi_expr p = simplify_with_trace(raw, tr);
    if (mono_dec(p, tr, budget)) return true;
    psi_expr d = psi_derive(p);
    if (d.is_zero()) { // positive constant: nonnegative everywhere
        record(tr, p, sep_rule::EVAL_AT_ONE, "positive constant");
        return true;
    }
    double v1 = psi_at_one(p);
    std::ostringstream os;
    os << "psi(1) = " << v1;
    if (v1 < 0) {
        record(tr, p, sep_rule::EVAL_AT_ONE, os.str() + " < 0: FAIL");
        return false;
    }
    record(tr, p, sep_rule::EVAL_AT_ONE, os.str() + " >= 0");
    record(tr, p, sep_rule::RECURSE_DERIVATIVE, "recursing on the derivative");
    return prove_rec(d, tr, budget - 1);
}

} // namespace

separability_trace prove_separable(const psi_expr& psi) {
    separability_trace tr;
    tr.success = prove_rec(psi, tr, term_budget(psi) + 2);
    return tr;
}

cstar_result find_cstar(const psi_expr& psi, const separability_trace& trace) {
    if (!trace.success) raise(errc::invariant_violation, "find_cstar on a failed trace");
    cstar_result r;
    if (psi.is_zero()) {
        r.value = r.bracket_lo = r.bracket_hi = kCstarCap;
        r.capped = true;
        return r;
    }
    if (psi_sign(psi, 1.0 + 1e-6) < 0) {
        r.value = r.bracket_lo = r.bracket_hi = 1.0;
        return r;
    }
    double lo = 1.0, hi = 2.0;
    while (hi < kCstarCap && psi_sign(psi, hi) >= 0) {
        lo = hi;
        hi *= 2;
    }
    if (hi >= kCstarCap) {
        r.value = r.bracket_lo = r.bracket_hi = kCstarCap;
        r.capped = true;
        return r;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-6 * lo; ++it) {
        double mid = 0.5 * (lo + hi);
        if (psi_sign(psi, mid) >= 0)
            lo = mid;
        else
            hi = mid;
    }
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    // the certified-nonnegative end: psi(value) >= 0 numerically, so every
    // alpha up to the derived cap satisfies the strengthened condition
    r.value = lo;
    return r;
}

double solve_alpha(double cstar, basis g, long long nstar) {
    if (cstar <= 1.0 + 1e-12) raise(errc::trivial_bound, "c* <= 1");
    if (g == basis::CONST) return cstar;
    if (nstar == kSymbolicNStar)
        raise(errc::domain_error, "numeric alpha needs a concrete n*");
    double n = double(nstar);
    double gn = g == basis::N ? n : (g == basis::N_LN_N ? n * std::log(n) : std::log(n));
    if (gn <= 0) return cstar; // n* = 1 degenerates; any alpha up to c* works
    return std::exp(std::log(cstar) / gn);
}

double prr_bound::log_alpha(long long nstar_value) const {
    if (trivial) return 0;
    if (strategy == strategy_kind::POWER) return std::log(cstar);
    if (nstar_value == kSymbolicNStar)
        raise(errc::domain_error, "numeric alpha needs a concrete n*");
    double n = double(nstar_value);
    double gn = g == basis::N ? n : n * std::log(n);
    if (gn <= 0) return std::log(cstar);
    return std::log(cstar) / gn;
}

std::string prr_bound::alpha_closed_form() const {
    if (trivial) return "1";
    std::ostringstream os;
    if (strategy == strategy_kind::POWER) {
        os << cstar;
        return os.str();
    }
    os << "(" << cstar << ")^(1/" << (g == basis::N ? "n*" : "(n* * ln(n*))") << ")";
    return os.str();
}

prr_bound derive_bound(const prr_spec& spec) {
    prr_bound b;
    b.name = spec.name;
    b.f = spec.f;
    b.kappa = spec.kappa;
    b.toll = spec.toll;
    b.nstar = spec.nstar;

    try {
        condition_expr cond = gen_condition(spec);
        b.stages.push_back({"condition", cond.text});
        basis g = leading_term(spec.f);

        std::vector<int> schedule{0};
        if (g == basis::N_LN_N)
            schedule = spec.partition_count > 0 ? std::vector<int>{spec.partition_count}
                                                : std::vector<int>{2, 4, 8, 16, 32, 64};

        for (int B : schedule) {
            condition_expr strong = overapprox_sums(cond, B);
            if (B == schedule.front())
                b.stages.push_back({"overapprox", strong.text});
            else
                b.stages.push_back({"overapprox", "retry with B = " + std::to_string(B)});
            psi_expr psi = substitute_simplify(strong, g);
            b.stages.push_back({"psi", print_psi(psi)});
            separability_trace tr = prove_separable(psi);
            if (!tr.success) {
                b.trace = tr;
                b.status_detail = "separability proof failed";
                continue;
            }
            cstar_result cs = find_cstar(psi, tr);
            if (cs.value <= 1.0 + 1e-6) {
                b.trace = tr;
                b.status_detail = "c* <= 1";
                continue;
            }
            b.trivial = false;
            b.status_detail.clear();
            b.strategy = strong.strategy;
            b.g = strong.strategy == strategy_kind::POWER ? basis::CONST : g;
            b.B_used = strong.blocks;
            b.cstar = cs.value;
            b.cstar_bracket = cs;
            b.psi = psi;
            b.trace = tr;
            std::ostringstream os;
            os << "c* = " << cs.value << (cs.capped ? " (doubling cap)" : "");
            b.stages.push_back({"cstar", os.str()});
            b.stages.push_back({"alpha", "alpha = " + b.alpha_closed_form()});
            return b;
        }
    } catch (const error& e) {
        b.status_detail = e.what();
    }
    b.trivial = true;
    if (b.status_detail.empty()) b.status_detail = "no feasible strategy";
    return b;
}

double eval_bound_log(const prr_bound& bound, const linlog_expr& kappa, long long nstar) {
    if (bound.trivial) return 0.0;
    double n = double(nstar);
    double fv = eval_linlog(bound.f, n);
    double kv = eval_linlog(kappa, n);
    if (kv < fv - 1e-9) raise(errc::kappa_below_f, "kappa(n*) below f(n*)");
    return (fv - kv) * bound.log_alpha(nstar);
}

double eval_bound(const prr_bound& bound, const linlog_expr& kappa, long long nstar) {
    double lg = eval_bound_log(bound, kappa, nstar);
    return std::min(1.0, std::exp(lg));
}

namespace {

// logsumexp accumulator
struct lse {
    double maxv = -std::numeric_limits<double>::infinity();
    double sum = 0;

    void add(double v) {
        if (v == -std::numeric_limits<double>::infinity()) return;
        if (v > maxv) {
            sum = sum * std::exp(maxv - v) + 1.0;
            maxv = v;
        } else {
            sum += std::exp(v - maxv);
        }
    }
    double value() const {
        if (sum == 0) return -std::numeric_limits<double>::infinity();
        return maxv + std::log(sum);
    }
};

// log(e^a - e^b) for a > b
double log_diff(double a, double b) {
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(-std::exp(b - a));
}

} // namespace

verify_result verify_condition_numeric(const prr_spec& spec, double log_alpha, long long n_max) {
    if (n_max > 100000) raise(errc::too_large, "verify limited to n_max <= 1e5");
    verify_result res;
    res.holds = true;
    res.worst_margin = std::numeric_limits<double>::infinity();
    if (std::fabs(log_alpha) > 7e307) raise(errc::overflow, "log(alpha) out of range");

    auto flog = [&](long long i) {
        return eval_linlog(spec.f, double(i), zero_convention::allow) * log_alpha;
    };

    if (spec.shape.kind == shape_kind::TWOCALL_SPLIT) {
        for (long long n = 2; n <= n_max; ++n) {
            lse e;
            for (long long i = 0; i < n; ++i) e.add(flog(i) + flog(n - 1 - i));
            double rhs = eval_linlog(spec.toll, double(n)) * log_alpha + e.value() -
                         std::log(double(n));
            double lhs = flog(n);
            double margin = lhs - rhs;
            res.worst_margin = std::min(res.worst_margin, margin);
            if (margin < -1e-9 * std::max(1.0, std::fabs(lhs))) {
                res.holds = false;
                res.first_violation = n;
                return res;
            }
        }
        return res;
    }

    double gamma = to_double(spec.shape.halfsplit_weight());
    // prefix[i] = log sum_{j=0}^{i} alpha^f(j)
    std::vector<double> prefix(static_cast<size_t>(n_max), 0.0);
    lse acc;
    for (long long i = 0; i < n_max; ++i) {
        acc.add(flog(i));
        prefix[static_cast<size_t>(i)] = acc.value();
    }
    auto range_log = [&](long long lo, long long hi) { // log sum_{i=lo}^{hi} alpha^f(i)
        double full = prefix[static_cast<size_t>(hi)];
        if (lo == 0) return full;
        return log_diff(full, prefix[static_cast<size_t>(lo - 1)]);
    };

    for (long long n = 2; n <= n_max; ++n) {
        lse e;
        if (gamma > 0) {
            lse half;
            half.add(range_log((n + 1) / 2, n - 1));
            half.add(range_log(n / 2, n - 1));
            e.add(std::log(gamma) + half.value());
        }
        if (gamma < 1) e.add(std::log1p(-gamma) + range_log(0, n - 1));
        double rhs = eval_linlog(spec.toll, double(n)) * log_alpha + e.value() -
                     std::log(double(n));
        double lhs = flog(n);
        double margin = lhs - rhs;
        res.worst_margin = std::min(res.worst_margin, margin);
        if (margin < -1e-9 * std::max(1.0, std::fabs(lhs))) {
            res.holds = false;
            res.first_violation = n;
            return res;
        }
    }
    return res;
}

} // namespace tailbound::prr
