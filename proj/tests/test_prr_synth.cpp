#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "tailbound/prr/synth.hpp"
#include "tailbound/report.hpp"

using namespace tailbound;
using namespace tailbound::prr;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(TAILBOUND_BENCH_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

prr_spec bench(const std::string& name) { return parse_prr_spec(slurp(name)); }

psi_expr pipeline_psi(const prr_spec& spec, int B = 0) {
    condition_expr c = gen_condition(spec);
    condition_expr s = overapprox_sums(c, B);
    return substitute_simplify(s, leading_term(spec.f));
}

} // namespace

TEST_CASE("gen_condition: shapes and refusal") {
    prr_spec qs = bench("quickselect.toml");
    condition_expr c = gen_condition(qs);
    CHECK(c.gamma == rational(1));
    CHECK(c.text.find("sum_{i=ceil(n/2)}^{n-1}") != std::string::npos);
    CHECK(c.text.find("alpha^(5*n)") != std::string::npos);

    prr_spec l1 = bench("l1diameter.toml");
    condition_expr cu = gen_condition(l1);
    CHECK(cu.gamma == rational(0));
    CHECK(cu.text.find("sum_{i=0}^{n-1}") != std::string::npos);

    prr_spec q2 = bench("quicksort.toml");
    CHECK_THROWS_AS(gen_condition(q2), error); // UnsupportedShape
}

TEST_CASE("quickselect pipeline: psi = 5c^1.5 ln c - 2c^2.5 + 2 exactly") {
    psi_expr psi = pipeline_psi(bench("quickselect.toml"));
    psi_expr want;
    want.add_term(5, 1.5, 1);
    want.add_term(-2, 2.5, 0);
    want.add_term(2, 0, 0);
    CHECK(psi == want);
}

TEST_CASE("l1diameter pipeline: psi = 5c^4 ln c - c^5 + 1") {
    psi_expr psi = pipeline_psi(bench("l1diameter.toml"));
    psi_expr want;
    want.add_term(5, 4, 1);
    want.add_term(-1, 5, 0);
    want.add_term(1, 0, 0);
    CHECK(psi == want);
}

TEST_CASE("randomsearch pipeline: n-free inequality in alpha") {
    psi_expr psi = pipeline_psi(bench("randomsearch.toml"));
    // 1 + 5 ln a - 2 a + a^(1 - 5 ln 2)
    psi_expr want;
    want.add_term(1, 0, 0);
    want.add_term(5, 0, 1);
    want.add_term(-2, 1, 0);
    want.add_term(1, 1 - 5 * std::log(2.0), 0);
    CHECK(psi == want);
    CHECK(psi_at_one(psi) == doctest::Approx(0.0));
}

TEST_CASE("l2diameter pipeline at B=2: four max-blocks") {
    psi_expr psi = pipeline_psi(bench("l2diameter.toml"), 2);
    // c^3.5 - (c^1.875 + c^2.75 + c^3.625 + c^4.5)/4, divided by c^1.875
    psi_expr want;
    want.add_term(1, 1.625, 0);
    for (double e : {0.0, 0.875, 1.75, 2.625}) want.add_term(-0.25, e, 0);
    CHECK(psi == want);
}

TEST_CASE("twocall over-approximation: B=8 gives four distinct exponents") {
    prr_spec q2 = bench("quicksort.toml");
    condition_expr c = gen_condition_twocall(q2);
    condition_expr s = overapprox_sums(c, 8);
    psi_expr psi = substitute_simplify(s, basis::N_LN_N);
    // 4 - (c + c^(1 - 63/8 ln(8/7)) + c^(1 - 27/4 ln(4/3)) + c^(1 - 45/8 ln(8/5)))
    psi_expr want;
    want.add_term(4, 0, 0);
    want.add_term(-1, 1, 0);
    want.add_term(-1, 1 - 63.0 / 8 * std::log(8.0 / 7), 0);
    want.add_term(-1, 1 - 27.0 / 4 * std::log(4.0 / 3), 0);
    want.add_term(-1, 1 - 45.0 / 8 * std::log(8.0 / 5), 0);
    CHECK(psi == want);
    CHECK(psi.size() == 5);
    // psi(c) >= 0 exactly up to c* slightly above 2.3
    CHECK(psi_eval(psi, 2.3) > 0);
    CHECK(psi_eval(psi, 2.4) < 0);
}

TEST_CASE("prove_separable: worked chain and counterexamples") {
    psi_expr qs;
    qs.add_term(5, 1.5, 1);
    qs.add_term(-2, 2.5, 0);
    qs.add_term(2, 0, 0);
    separability_trace tr = prove_separable(qs);
    CHECK(tr.success);
    bool recursed = false;
    for (const auto& s : tr.steps) recursed |= s.rule == sep_rule::RECURSE_DERIVATIVE;
    CHECK(recursed);

    psi_expr dec; // -c + 1: decreasing from 0
    dec.add_term(-1, 1, 0);
    dec.add_term(1, 0, 0);
    CHECK(prove_separable(dec).success);

    psi_expr bad; // c - 2: psi(1) = -1
    bad.add_term(1, 1, 0);
    bad.add_term(-2, 0, 0);
    CHECK_FALSE(prove_separable(bad).success);
}

TEST_CASE("find_cstar: printed roots") {
    psi_expr qs;
    qs.add_term(5, 1.5, 1);
    qs.add_term(-2, 2.5, 0);
    qs.add_term(2, 0, 0);
    auto tr = prove_separable(qs);
    REQUIRE(tr.success);
    cstar_result c = find_cstar(qs, tr);
    CHECK(c.value == doctest::Approx(2.74).epsilon(0.01 / 2.74));

    psi_expr p1; // 7.5 ln c + 5 - 5c, root near 2.144
    p1.add_term(7.5, 0, 1);
    p1.add_term(5, 0, 0);
    p1.add_term(-5, 1, 0);
    auto tr1 = prove_separable(p1);
    REQUIRE(tr1.success);
    CHECK(find_cstar(p1, tr1).value == doctest::Approx(2.1440).epsilon(0.005));

    psi_expr p2; // 2 - c
    p2.add_term(2, 0, 0);
    p2.add_term(-1, 1, 0);
    auto tr2 = prove_separable(p2);
    REQUIRE(tr2.success);
    CHECK(find_cstar(p2, tr2).value == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("separability semantics: sign grid around c*") {
    const char* files[] = {"quickselect.toml", "l1diameter.toml", "randomsearch.toml",
                           "l2diameter.toml"};
    for (const char* f : files) {
        prr_bound b = derive_bound(bench(f));
        REQUIRE_FALSE(b.trivial);
        REQUIRE_FALSE(b.cstar_bracket.capped);
        double lo = b.cstar_bracket.bracket_lo;
        double hi = b.cstar_bracket.bracket_hi;
        for (int i = 0; i < 1000; ++i) {
            double c = 1.0 + (lo - 1.0) * double(i) / 999.0;
            CHECK(psi_sign(b.psi, c) >= 0);
        }
        for (int i = 0; i < 1000; ++i) {
            double c = hi + (4 * b.cstar - hi) * double(i + 1) / 1000.0;
            CHECK(psi_sign(b.psi, c) < 0);
        }
    }
}

TEST_CASE("solve_alpha") {
    CHECK(solve_alpha(2.74, basis::N, 100) == doctest::Approx(std::pow(2.74, 0.01)));
    CHECK(solve_alpha(4.0, basis::CONST, kSymbolicNStar) == doctest::Approx(4.0));
    CHECK_THROWS_AS(solve_alpha(1.0, basis::N, 100), error); // TrivialBound
    CHECK_THROWS_AS(solve_alpha(0.5, basis::N, 100), error);
}

TEST_CASE("derive_bound: quickselect numbers") {
    prr_spec qs = bench("quickselect.toml");
    prr_bound b = derive_bound(qs);
    REQUIRE_FALSE(b.trivial);
    CHECK(b.cstar == doctest::Approx(2.74).epsilon(0.02 / 2.74));

    // Pr[T >= 12 n*] <= (c*)^-7 < 0.0009
    double at12 = eval_bound(b, parse_linlog("12*n"), 100);
    CHECK(at12 < 0.0009);
    CHECK(at12 == doctest::Approx(std::pow(b.cstar, -7.0)).epsilon(1e-6));

    // Pr[T >= 11 n*] ~ 0.0024
    double at11 = eval_bound(b, parse_linlog("11*n"), 100);
    CHECK(at11 == doctest::Approx(0.0024).epsilon(0.15));

    // monotone in kappa
    CHECK(at12 < at11);
    // kappa = f gives exactly 1
    CHECK(eval_bound(b, parse_linlog("5*n"), 100) == doctest::Approx(1.0));
    CHECK_THROWS_AS(eval_bound(b, parse_linlog("4*n"), 100), error); // KappaBelowF
}

TEST_CASE("derive_bound: randomsearch gives (n*)^-8.24") {
    prr_bound b = derive_bound(bench("randomsearch.toml"));
    REQUIRE_FALSE(b.trivial);
    CHECK(b.strategy == strategy_kind::POWER);
    double lg = eval_bound_log(b, parse_linlog("11*ln(n)"), 1000);
    double exponent = -lg / std::log(1000.0);
    CHECK(exponent == doctest::Approx(8.24).epsilon(0.15 / 8.24));
}

TEST_CASE("derive_bound: l2diameter auto schedule settles at B=2") {
    prr_spec l2 = bench("l2diameter.toml");
    l2.partition_count = 0;
    prr_bound b = derive_bound(l2);
    REQUIRE_FALSE(b.trivial);
    CHECK(b.B_used == 2);
}

TEST_CASE("derive_bound: trivial outcomes are reported, not thrown") {
    // constant f cannot be reduced
    const char* cst = R"([prr]
name = "cst"
toll = "0"
shape = "uniform"
f = "5"
kappa = "6"
nstar = 10
)";
    prr_bound b = derive_bound(parse_prr_spec(std::string(cst)));
    CHECK(b.trivial);
    CHECK_FALSE(b.status_detail.empty());
}

TEST_CASE("verify_condition_numeric: quicksort") {
    prr_spec q2 = bench("quicksort.toml");
    double la = std::log(2.3) / 200.0;
    verify_result ok = verify_condition_numeric(q2, la, 200);
    CHECK(ok.holds);

    // a large constant alpha breaks the inequality at some n
    verify_result bad = verify_condition_numeric(q2, std::log(3.0), 200);
    CHECK_FALSE(bad.holds);
    CHECK(bad.first_violation >= 2);

    // vacuous range
    verify_result vac = verify_condition_numeric(q2, std::log(3.0), 1);
    CHECK(vac.holds);
}

TEST_CASE("verify_condition_numeric: quickselect at the synthesized alpha") {
    prr_spec qs = bench("quickselect.toml");
    qs.nstar = 50;
    prr_bound b = derive_bound(qs);
    REQUIRE_FALSE(b.trivial);
    verify_result ok = verify_condition_numeric(qs, b.log_alpha(50), 50);
    CHECK(ok.holds);
}

TEST_CASE("eval_bound: quicksort closed family via a pinned c*") {
    prr_bound b;
    b.trivial = false;
    b.strategy = strategy_kind::GEOMETRIC; // alpha = cstar^(1/n*)
    b.g = basis::N;
    b.cstar = 2.3;
    b.f = parse_linlog("9*n*ln(n)");
    b.nstar = 200;
    double l23 = std::log(2.3);

    // kappa = 11 n ln n + 12 n  ->  (2.3)^(-2 ln n* - 12)
    double lg = eval_bound_log(b, parse_linlog("11*n*ln(n) + 12*n"), 200);
    CHECK(lg == doctest::Approx((-2 * std::log(200.0) - 12) * l23).epsilon(1e-9));

    // general bound family (k1, k2) in {(1,1), (2,12)}
    double lg11 = eval_bound_log(b, parse_linlog("10*n*ln(n) + 1*n"), 200);
    CHECK(lg11 == doctest::Approx((-std::log(200.0) - 1) * l23).epsilon(1e-9));
    double lg212 = eval_bound_log(b, parse_linlog("11*n*ln(n) + 12*n"), 200);
    CHECK(lg212 == doctest::Approx((-2 * std::log(200.0) - 12) * l23).epsilon(1e-9));

    CHECK(report::power_family_formula(2.3, b.f, parse_linlog("11*n*ln(n) + 12*n"), basis::N) ==
          "(2.3)^(-2*ln(n*) - 12)");
}

namespace {

struct random_spec_gen {
    std::mt19937 gen{20240817};

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

    prr_spec make() {
        prr_spec s;
        s.name = "random";
        s.nstar = 60;
        int kind = pick(0, 2);
        int shape = pick(0, 2);
        if (kind == 2) shape = 0; // blocks strategy: uniform only
        if (shape == 0) {
            s.shape.kind = shape_kind::UNIFORM;
        } else if (shape == 1) {
            s.shape.kind = shape_kind::HALFSPLIT;
        } else {
            s.shape.kind = shape_kind::MIXED;
            s.shape.gamma = rational(pick(1, 9), 10);
        }
        if (kind == 0) { // geometric
            int q2 = pick(4, 16); // q in [2, 8] halves
            s.f.set_coef(basis::N, rational(q2, 2));
            int k1 = pick(0, 2);
            int k2 = pick(0, 1);
            int k3 = pick(-k1, 2); // toll(1) = k1 + k3 >= 0
            s.toll.set_coef(basis::N, k1);
            s.toll.set_coef(basis::LN_N, k2);
            s.toll.set_coef(basis::CONST, k3);
            s.kappa = s.f.scaled(3);
        } else if (kind == 1) { // power
            s.f.set_coef(basis::LN_N, rational(pick(3, 9)));
            s.toll.set_coef(basis::CONST, rational(pick(0, 2)));
            s.kappa = s.f.scaled(3);
        } else { // blocks
            s.f.set_coef(basis::N_LN_N, rational(pick(6, 12), 2));
            s.toll.set_coef(basis::N_LN_N, 1);
            if (pick(0, 1)) s.toll.set_coef(basis::N, rational(pick(0, 1)));
            s.kappa = s.f.scaled(3);
        }
        s.partition_count = 0;
        return s;
    }
};

} // namespace

TEST_CASE("soundness chain: synthesized alpha satisfies the exact inequality") {
    // 200 random (spec, n <= 60, alpha in (1, alpha_max]) triples: whenever the
    // pipeline emits a bound, the supermartingale inequality holds by direct
    // summation over the exact child distribution.
    random_spec_gen g;
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    int emitted = 0;
    for (int rep = 0; rep < 200; ++rep) {
        prr_spec spec = g.make();
        prr_bound b = derive_bound(spec);
        if (b.trivial) continue;
        ++emitted;
        double la_max = b.log_alpha(60);
        double la = la_max * unif(g.gen); // alpha in (1, alpha_max]
        verify_result vr = verify_condition_numeric(spec, la, 60);
        if (!vr.holds) {
            CAPTURE(print_linlog(spec.f));
            CAPTURE(print_linlog(spec.toll));
            CAPTURE(to_double(spec.shape.halfsplit_weight()));
            CAPTURE(vr.first_violation);
        }
        CHECK(vr.holds);
    }
    CHECK(emitted > 50); // the generator must actually exercise the pipeline
}

TEST_CASE("trace depth stays within the term budget") {
    prr_bound b = derive_bound(bench("quickselect.toml"));
    int recursions = 0;
    for (const auto& s : b.trace.steps)
        recursions += s.rule == sep_rule::RECURSE_DERIVATIVE ? 1 : 0;
    CHECK(recursions <= 4); // #terms + #log-terms of the input psi
}
