#include "tailbound/prr/chain.hpp"

#include <cmath>

namespace tailbound::prr {

namespace {

constexpr std::uint64_t kStepCap = 1000000000ULL;
constexpr long long kExactMaxN = 14;

// Draws one halfsplit child size with a single uniform draw over the n-slot
// lattice {ceil(n/2)..n-1} (+) {floor(n/2)..n-1}.
long long sample_halfsplit(long long n, trial_rng& rng) {
    long long u = static_cast<long long>(rng.below(static_cast<std::uint64_t>(n)));
    long long lo2 = n / 2;       // floor
    long long lo1 = (n + 1) / 2; // ceil
    long long count2 = n - lo2;  // size of the floor-anchored range
    if (u < count2) return lo2 + u;
    return lo1 + (u - count2);
}

// Exact Bernoulli(gamma) using the rational's own lattice.
bool bernoulli_exact(const rational& gamma, trial_rng& rng) {
    if (gamma == 0) return false;
    if (gamma == 1) return true;
    bigint den = denominator(gamma);
    bigint num = numerator(gamma);
    if (fits_uint64(den)) {
        std::uint64_t d = den.convert_to<std::uint64_t>();
        std::uint64_t m = num.convert_to<std::uint64_t>();
        return rng.below(d) < m;
    }
    return rng.uniform01() < to_double(gamma);
}

void push_child(chain_state& state, long long h) {
    if (h >= 2) state.pending.push_back(h);
}

} // namespace

namespace {

// double snapshot of the toll coefficients for the simulation hot path
struct toll_view {
    double c0, cln, cn, cnln;

    explicit toll_view(const linlog_expr& e)
        : c0(to_double(e.coef(basis::CONST))), cln(to_double(e.coef(basis::LN_N))),
          cn(to_double(e.coef(basis::N))), cnln(to_double(e.coef(basis::N_LN_N))) {}

    double at(long long n) const {
        double nn = double(n);
        double ln = std::log(nn);
        return c0 + cln * ln + cn * nn + cnln * nn * ln;
    }
};

} // namespace

void step(chain_state& state, const prr_spec& spec, trial_rng& rng) {
    if (state.terminal()) raise(errc::terminal_state, "step on terminal chain state");
    long long n = state.pending.back();
    state.pending.pop_back();
    if (n <= 1) return; // T(0) = T(1) = 0, popped at zero cost
    state.accumulated_cost += eval_linlog(spec.toll, double(n), zero_convention::allow);
    switch (spec.shape.kind) {
    case shape_kind::UNIFORM:
        push_child(state, static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))));
        break;
    case shape_kind::HALFSPLIT:
        push_child(state, sample_halfsplit(n, rng));
        break;
    case shape_kind::MIXED:
        if (bernoulli_exact(spec.shape.gamma, rng))
            push_child(state, sample_halfsplit(n, rng));
        else
            push_child(state, static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))));
        break;
    case shape_kind::TWOCALL_SPLIT: {
        long long pivot = static_cast<long long>(rng.below(static_cast<std::uint64_t>(n)));
        push_child(state, pivot);
        push_child(state, n - 1 - pivot);
        break;
    }
    }
}

double run_trial(const prr_spec& spec, long long nstar, trial_rng& rng) {
    // same transition as step(), with the toll coefficients snapshotted once
    toll_view toll(spec.toll);
    chain_state state = chain_state::initial(nstar);
    std::uint64_t steps = 0;
    while (!state.terminal()) {
        long long n = state.pending.back();
        state.pending.pop_back();
        if (n >= 2) {
            state.accumulated_cost += toll.at(n);
            switch (spec.shape.kind) {
            case shape_kind::UNIFORM:
                push_child(state, static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))));
                break;
            case shape_kind::HALFSPLIT:
                push_child(state, sample_halfsplit(n, rng));
                break;
            case shape_kind::MIXED:
                if (bernoulli_exact(spec.shape.gamma, rng))
                    push_child(state, sample_halfsplit(n, rng));
                else
                    push_child(state,
                               static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))));
                break;
            case shape_kind::TWOCALL_SPLIT: {
                long long pivot = static_cast<long long>(rng.below(static_cast<std::uint64_t>(n)));
                push_child(state, pivot);
                push_child(state, n - 1 - pivot);
                break;
            }
            }
        }
        if (++steps > kStepCap) raise(errc::runtime_cap_exceeded, "chain exceeded 1e9 steps");
    }
    return state.accumulated_cost;
}

namespace {

cost_dist shifted(const cost_dist& d, double delta) {
    cost_dist out;
    for (const auto& [c, p] : d) out[c + delta] += p;
    return out;
}

cost_dist convolve(const cost_dist& a, const cost_dist& b) {
    cost_dist out;
    for (const auto& [ca, pa] : a)
        for (const auto& [cb, pb] : b) out[ca + cb] += pa * pb;
    return out;
}

} // namespace

cost_dist exact_cost_distribution(const prr_spec& spec, long long n) {
    if (n > kExactMaxN) raise(errc::too_large, "exact distribution limited to n <= 14");
    std::vector<cost_dist> memo(static_cast<size_t>(std::max<long long>(n + 1, 2)));
    memo[0] = {{0.0, 1}};
    memo[1] = {{0.0, 1}};
    for (long long m = 2; m <= n; ++m) {
        cost_dist dist;
        for (const auto& oc : child_distribution(spec.shape, m)) {
            cost_dist branch = {{0.0, 1}};
            for (long long h : oc.sizes) {
                if (h <= 1) continue;
                branch = convolve(branch, memo[static_cast<size_t>(h)]);
            }
            for (const auto& [c, p] : branch) dist[c] += p * oc.prob;
        }
        memo[static_cast<size_t>(m)] =
            shifted(dist, eval_linlog(spec.toll, double(m), zero_convention::allow));
    }
    return memo[static_cast<size_t>(n)];
}

rational exact_tail(const prr_spec& spec, long long nstar, double kappa) {
    cost_dist d = exact_cost_distribution(spec, nstar);
    rational tail = 0;
    for (const auto& [c, p] : d)
        if (c >= kappa - 1e-12) tail += p;
    return tail;
}

} // namespace tailbound::prr
