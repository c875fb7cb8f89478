#include "tailbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <vector>

#include "tailbound/prr/chain.hpp"

namespace tailbound::oracle {

double wilson_upper_99(std::uint64_t hits, std::uint64_t trials) {
    if (trials == 0) return 1.0;
    const double z = 2.3263478740408408; // one-sided 99%
    double n = double(trials);
    double p = double(hits) / n;
    double z2 = z * z;
    double center = p + z2 / (2 * n);
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    double upper = (center + half) / (1 + z2 / n);
    return std::min(1.0, upper);
}

namespace {

std::vector<tail_estimate> make_estimates(const std::vector<double>& kappas,
                                          std::uint64_t trials) {
    std::vector<tail_estimate> out;
    for (double k : kappas) {
        tail_estimate e;
        e.kappa = k;
        e.trials = trials;
        out.push_back(e);
    }
    return out;
}

void finalize(std::vector<tail_estimate>& est) {
    for (auto& e : est) {
        e.point = e.trials ? double(e.hits) / double(e.trials) : 0.0;
        e.wilson_upper_99 = wilson_upper_99(e.hits, e.trials);
    }
}

// Runs body(t) for every trial index on a few worker threads. Trials are
// independent given the per-trial derived streams and the per-shard hit
// counters are integers, so any schedule reproduces the serial counts.
template <typename Body>
void for_each_trial(std::uint64_t trials, Body body) {
    unsigned workers = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
    if (trials < 10000 || workers == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) body(t, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t t = w; t < trials; t += workers) body(t, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

std::vector<tail_estimate> estimate_tail(const prr::prr_spec& spec, long long nstar,
                                         const std::vector<double>& kappas,
                                         std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) raise(errc::domain_error, "trials must be >= 1");
    auto est = make_estimates(kappas, trials);
    std::vector<std::vector<std::uint64_t>> hits(8, std::vector<std::uint64_t>(kappas.size(), 0));
    for_each_trial(trials, [&](std::uint64_t t, unsigned w) {
        trial_rng rng(seed, t);
        double cost = prr::run_trial(spec, nstar, rng);
        for (size_t i = 0; i < kappas.size(); ++i)
            if (cost >= kappas[i]) ++hits[w][i];
    });
    for (size_t i = 0; i < kappas.size(); ++i)
        for (const auto& shard : hits) est[i].hits += shard[i];
    finalize(est);
    return est;
}

namespace {

// Exact-in-doubles compiled form of a loop spec: valid when every rational
// involved is dyadic with small magnitude, so double arithmetic is exact.
struct compiled_loop {
    bool ok = false;
    size_t nvars = 0;
    std::vector<double> init;
    struct ineq {
        std::vector<double> coef;
        double bound;
    };
    std::vector<ineq> guard;
    struct step {
        double cum; // cumulative probability scaled to the lattice
        std::vector<double> delta;
    };
    struct branch {
        std::vector<ineq> region;
        std::uint64_t lattice = 0; // common denominator; 0 = double fallback
        std::vector<std::uint64_t> cum;
        std::vector<std::vector<double>> deltas;
    };
    std::vector<branch> branches;
};

bool dyadic_small(const rational& q) {
    bigint den = denominator(q);
    while (den % 2 == 0) den /= 2;
    if (den != 1) return false;
    return abs(numerator(q)) < bigint(1) << 50 && denominator(q) < bigint(1) << 40;
}

compiled_loop compile(const loop::loop_spec& s) {
    compiled_loop c;
    c.nvars = s.vars.size();
    auto conv = [&](const rational& q, bool& ok) {
        if (!dyadic_small(q)) ok = false;
        return to_double(q);
    };
    bool ok = true;
    for (const auto& v : s.init) c.init.push_back(conv(v, ok));
    auto conv_ineq = [&](const loop::linear_ineq& g) {
        compiled_loop::ineq out;
        for (const auto& a : g.coef) out.coef.push_back(conv(a, ok));
        out.bound = conv(g.bound, ok);
        return out;
    };
    for (const auto& g : s.guard) c.guard.push_back(conv_ineq(g));
    for (const auto& b : s.branches) {
        compiled_loop::branch cb;
        for (const auto& r : b.region) cb.region.push_back(conv_ineq(r));
        bigint den = 1;
        for (const auto& st : b.steps) den = lcm(den, denominator(st.prob));
        if (!fits_uint64(den) || den > bigint(1) << 60) {
            ok = false;
        } else {
            cb.lattice = den.convert_to<std::uint64_t>();
            bigint acc = 0;
            for (const auto& st : b.steps) {
                acc += numerator(st.prob) * (den / denominator(st.prob));
                cb.cum.push_back(acc.convert_to<std::uint64_t>());
                std::vector<double> d;
                for (const auto& dv : st.delta) d.push_back(conv(dv, ok));
                cb.deltas.push_back(std::move(d));
            }
        }
        c.branches.push_back(std::move(cb));
    }
    c.ok = ok;
    return c;
}

bool cineq_sat(const compiled_loop::ineq& q, const std::vector<double>& x) {
    double lhs = 0;
    for (size_t i = 0; i < q.coef.size(); ++i) lhs += q.coef[i] * x[i];
    return lhs <= q.bound;
}

std::uint64_t run_compiled(const compiled_loop& c, trial_rng& rng, std::uint64_t cap,
                           bool& capped) {
    std::vector<double> x = c.init;
    std::uint64_t it = 0;
    while (true) {
        bool in_guard = true;
        for (const auto& g : c.guard)
            if (!cineq_sat(g, x)) {
                in_guard = false;
                break;
            }
        if (!in_guard) return it;
        if (it >= cap) {
            capped = true;
            return it;
        }
        int bi = -1;
        for (size_t b = 0; b < c.branches.size(); ++b) {
            bool okb = true;
            for (const auto& r : c.branches[b].region)
                if (!cineq_sat(r, x)) {
                    okb = false;
                    break;
                }
            if (okb) {
                bi = static_cast<int>(b);
                break;
            }
        }
        if (bi < 0) raise(errc::no_branch_covers, "region gap during simulation");
        const auto& br = c.branches[static_cast<size_t>(bi)];
        std::uint64_t u = rng.below(br.lattice);
        size_t si = 0;
        while (si + 1 < br.cum.size() && u >= br.cum[si]) ++si;
        for (size_t i = 0; i < x.size(); ++i) x[i] += br.deltas[si][i];
        ++it;
    }
}

} // namespace

std::vector<tail_estimate> estimate_tail(const loop::loop_spec& spec,
                                         const std::vector<double>& kappas,
                                         std::uint64_t trials, std::uint64_t seed,
                                         std::uint64_t cap) {
    if (trials < 1) raise(errc::domain_error, "trials must be >= 1");
    auto est = make_estimates(kappas, trials);
    compiled_loop fast = compile(spec);
    std::vector<std::vector<std::uint64_t>> hits(8, std::vector<std::uint64_t>(kappas.size(), 0));
    std::vector<std::uint64_t> caps(8, 0);
    for_each_trial(trials, [&](std::uint64_t t, unsigned w) {
        trial_rng rng(seed, t);
        std::uint64_t iters;
        bool capped = false;
        if (fast.ok) {
            iters = run_compiled(fast, rng, cap, capped);
        } else {
            loop::loop_trace tr = loop::run_trial(spec, rng, cap);
            iters = tr.iterations;
            capped = tr.cap_exceeded;
        }
        if (capped) {
            ++caps[w];
            return;
        }
        for (size_t i = 0; i < kappas.size(); ++i)
            if (double(iters) >= kappas[i]) ++hits[w][i];
    });
    for (size_t i = 0; i < kappas.size(); ++i) {
        for (const auto& shard : hits) est[i].hits += shard[i];
        for (std::uint64_t c : caps) est[i].cap_exceeded += c;
    }
    finalize(est);
    return est;
}

const char* dominance_name(dominance d) {
    switch (d) {
    case dominance::PASS: return "PASS";
    case dominance::WARN: return "WARN";
    case dominance::FAIL: return "FAIL";
    }
    return "?";
}

dominance check_dominance(double bound_value, const tail_estimate& est) {
    if (est.point > bound_value) return dominance::FAIL;
    if (est.wilson_upper_99 > bound_value) return dominance::WARN;
    return dominance::PASS;
}

double karp_reference(const std::string& name, const std::string& tail_id) {
    // Cookbook-method reference constants from the comparison tables:
    // quickselect at r*n -> (3/4)^(r-4); randomsearch at r*ln n ->
    // (3/4)^(r - 1/ln(4/3)); l1diameter at r*n -> (1/2)^(r-2);
    // l2diameter at r*n*ln n -> (1/2)^(r-2); quicksort at 10*n*ln n -> e^-4.
    auto qs = [](double r) { return std::pow(0.75, r - 4.0); };
    auto rs = [](double r) { return std::pow(0.75, r - 1.0 / std::log(4.0 / 3.0)); };
    auto l1 = [](double r) { return std::pow(0.5, r - 2.0); };
    struct entry {
        const char* name;
        const char* tail;
        double value;
    };
    const entry table[] = {
        {"quickselect", "17n", qs(17)},  {"quickselect", "15n", qs(15)},
        {"quickselect", "12n", qs(12)},  {"quickselect", "11n", qs(11)},
        {"quickselect", "8n", qs(8)},    {"quickselect", "6n", qs(6)},
        {"quickselect", "24n", qs(24)},  {"randomsearch", "11ln", rs(11)},
        {"randomsearch", "10ln", rs(10)}, {"randomsearch", "8ln", rs(8)},
        {"randomsearch", "7ln", rs(7)},  {"randomsearch", "5ln", rs(5)},
        {"l1diameter", "13n", l1(13)},   {"l1diameter", "11n", l1(11)},
        {"l1diameter", "9n", l1(9)},     {"l1diameter", "7n", l1(7)},
        {"l1diameter", "5n", l1(5)},     {"l2diameter", "20nlnn", l1(20)},
        {"l2diameter", "15nlnn", l1(15)}, {"l2diameter", "9nlnn", l1(9)},
        {"quicksort", "10nlnn", std::exp(-4.0)},
    };
    for (const auto& e : table)
        if (name == e.name && tail_id == e.tail) return e.value;
    raise(errc::unknown_reference, name + " / " + tail_id);
}

} // namespace tailbound::oracle
