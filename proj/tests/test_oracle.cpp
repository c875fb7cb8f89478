#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "tailbound/loop/synth.hpp"
#include "tailbound/oracle.hpp"
#include "tailbound/prr/chain.hpp"
#include "tailbound/prr/synth.hpp"

using namespace tailbound;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(TAILBOUND_BENCH_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("wilson upper limit basics") {
    CHECK(oracle::wilson_upper_99(0, 1000) > 0.0);
    CHECK(oracle::wilson_upper_99(0, 1000) < 0.01);
    CHECK(oracle::wilson_upper_99(1000, 1000) == doctest::Approx(1.0));
    double p50 = oracle::wilson_upper_99(500, 1000);
    CHECK(p50 > 0.5);
    CHECK(p50 < 0.55);
}

TEST_CASE("estimate_tail (PRR): degenerate cases are exact") {
    prr::prr_spec qs = prr::parse_prr_spec(slurp("quickselect.toml"));
    auto est = oracle::estimate_tail(qs, 2, {1.0, 1.5, 0.0}, 200, 0);
    CHECK(est[0].point == doctest::Approx(1.0)); // T(2) = 1
    CHECK(est[1].point == doctest::Approx(0.0));
    CHECK(est[2].point == doctest::Approx(1.0)); // kappa = 0: costs >= 0

    // monotone tails on a shared trial set
    auto tails = oracle::estimate_tail(qs, 60, {100, 200, 300, 400}, 2000, 1);
    for (size_t i = 1; i < tails.size(); ++i) CHECK(tails[i].hits <= tails[i - 1].hits);
}

TEST_CASE("estimate_tail matches the exact oracle on quicksort n*=3") {
    prr::prr_spec q = prr::parse_prr_spec(slurp("quicksort.toml"));
    auto est = oracle::estimate_tail(q, 3, {3.0}, 100000, 7);
    double se = std::sqrt(2.0 / 3 * (1.0 / 3) / 100000.0);
    CHECK(est[0].point == doctest::Approx(2.0 / 3).epsilon(3 * se / (2.0 / 3)));
}

TEST_CASE("estimator consistency against exact tails, several seeds") {
    prr::prr_spec qs = prr::parse_prr_spec(slurp("quickselect.toml"));
    const long long n = 10;
    prr::cost_dist exact = prr::exact_cost_distribution(qs, n);
    std::vector<double> grid;
    for (const auto& [c, p] : exact)
        if (grid.empty() || c > grid.back() + 1) grid.push_back(c);
    int ok = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto est = oracle::estimate_tail(qs, n, grid, 20000, seed);
        for (size_t i = 0; i < grid.size(); ++i) {
            double ex = to_double(prr::exact_tail(qs, n, grid[i]));
            double se = std::sqrt(std::max(ex * (1 - ex), 1e-12) / 20000.0);
            ++total;
            if (std::fabs(est[i].point - ex) <= 4 * se + 1e-9) ++ok;
        }
    }
    CHECK(ok == total);
}

TEST_CASE("check_dominance verdicts") {
    oracle::tail_estimate e;
    e.kappa = 10;
    e.trials = 1000000;
    e.hits = 100;
    e.point = 1e-4;
    e.wilson_upper_99 = 1.3e-4;
    CHECK(oracle::check_dominance(1e-3, e) == oracle::dominance::PASS);
    CHECK(oracle::check_dominance(1.1e-4, e) == oracle::dominance::WARN);
    CHECK(oracle::check_dominance(1e-9, e) == oracle::dominance::FAIL);
    // trivial bound 1 passes against anything
    e.point = 1.0;
    e.wilson_upper_99 = 1.0;
    CHECK(oracle::check_dominance(1.0, e) == oracle::dominance::PASS);
}

TEST_CASE("karp_reference lookups") {
    CHECK(oracle::karp_reference("quickselect", "17n") ==
          doctest::Approx(std::pow(0.75, 13)).epsilon(1e-12));
    CHECK(oracle::karp_reference("quickselect", "17n") == doctest::Approx(0.024).epsilon(0.02));
    CHECK(oracle::karp_reference("l1diameter", "13n") ==
          doctest::Approx(4.8828125e-4).epsilon(1e-12));
    CHECK(oracle::karp_reference("quickselect", "24n") ==
          doctest::Approx(0.00318).epsilon(0.01));
    CHECK_THROWS_AS(oracle::karp_reference("quickselect", "99n"), error);
}

TEST_CASE("loop estimates: countdown is deterministic") {
    loop::loop_spec cd = loop::parse_loop_spec(slurp("countdown.toml"));
    auto est = oracle::estimate_tail(cd, {6.0, 7.0}, 5000, 0);
    CHECK(est[0].point == doctest::Approx(1.0)); // T = 6 exactly
    CHECK(est[1].point == doctest::Approx(0.0));
    CHECK(est[0].cap_exceeded == 0);
}

TEST_CASE("cap-exceeded trials are counted separately, never as hits") {
    loop::loop_spec zd = loop::parse_loop_spec(slurp("zerodrift.toml"));
    auto est = oracle::estimate_tail(zd, {5.0}, 300, 0, /*cap=*/50);
    CHECK(est[0].cap_exceeded > 0);
    CHECK(est[0].hits + est[0].cap_exceeded <= est[0].trials);
}

TEST_CASE("every BOUND-status benchmark passes dominance at its kappa grid") {
    struct prr_row {
        const char* file;
        long long nstar;
        const char* kappas[3];
    } prrs[] = {
        {"quickselect.toml", 60, {"6*n", "9*n", "12*n"}},
        {"randomsearch.toml", 200, {"6*ln(n)", "8*ln(n)", "11*ln(n)"}},
        {"l1diameter.toml", 60, {"6*n", "9*n", "13*n"}},
        {"l2diameter.toml", 100, {"4*n*ln(n)", "9*n*ln(n)", "20*n*ln(n)"}},
    };
    for (const auto& row : prrs) {
        prr::prr_spec spec = prr::parse_prr_spec(slurp(row.file));
        spec.nstar = row.nstar;
        prr::prr_bound b = prr::derive_bound(spec);
        REQUIRE_FALSE(b.trivial);
        std::vector<double> kappas;
        for (const char* k : row.kappas)
            kappas.push_back(eval_linlog(parse_linlog(k), double(row.nstar)));
        auto est = oracle::estimate_tail(spec, row.nstar, kappas, 20000, 11);
        for (size_t i = 0; i < kappas.size(); ++i) {
            double bound = prr::eval_bound(b, parse_linlog(row.kappas[i]), row.nstar);
            CAPTURE(row.file);
            CAPTURE(row.kappas[i]);
            CHECK(oracle::check_dominance(bound, est[i]) != oracle::dominance::FAIL);
        }
    }

    const char* loops[] = {"rdwalk1.toml", "rdwalk2.toml", "rdwalk3.toml",
                           "countdown.toml", "prspeed.toml", "advrw1d.toml"};
    for (const char* file : loops) {
        loop::loop_spec spec = loop::parse_loop_spec(slurp(file));
        loop::loop_bound b = loop::derive_loop_bound(spec);
        std::vector<double> kappas = {2 * b.eta_init, 4 * b.eta_init, 8 * b.eta_init};
        auto est = oracle::estimate_tail(spec, kappas, 20000, 12);
        for (size_t i = 0; i < kappas.size(); ++i) {
            CAPTURE(file);
            CAPTURE(kappas[i]);
            CHECK(oracle::check_dominance(b.eval(kappas[i]), est[i]) !=
                  oracle::dominance::FAIL);
        }
    }
}

TEST_CASE("deliberately corrupted bound fails dominance") {
    prr::prr_spec spec = prr::parse_prr_spec(slurp("quickselect.toml"));
    auto est = oracle::estimate_tail(spec, 60, {eval_linlog(parse_linlog("5*n"), 60)}, 5000, 3);
    // the tail at kappa = f(n*) is macroscopic; 1e-9 cannot dominate it
    CHECK(oracle::check_dominance(1e-9, est[0]) == oracle::dominance::FAIL);
}

TEST_CASE("loop estimates: compiled fast path agrees with the reference path") {
    loop::loop_spec rw = loop::parse_loop_spec(slurp("rdwalk1.toml"));
    auto est = oracle::estimate_tail(rw, {22.0}, 3000, 9);
    // reference: run the rational-state trial directly with the same streams
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < 3000; ++t) {
        trial_rng rng(9, t);
        auto tr = loop::run_trial(rw, rng);
        if (double(tr.iterations) >= 22.0) ++hits;
    }
    CHECK(est[0].hits == hits);
}
