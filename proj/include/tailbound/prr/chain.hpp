#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tailbound/prr/spec.hpp"
#include "tailbound/rng.hpp"

namespace tailbound::prr {

// State of the stack Markov chain: pending instance sizes plus the cost
// accumulated so far. Initial state is (1, <n*>); terminal when the stack
// is empty.
struct chain_state {
    std::vector<long long> pending; // top at the back
    double accumulated_cost = 0;

    bool terminal() const { return pending.empty(); }
    size_t depth() const { return pending.size(); }

    static chain_state initial(long long nstar) {
        chain_state s;
        if (nstar >= 1) s.pending.push_back(nstar);
        return s;
    }
};

// One transition: a top of size <= 1 pops at zero cost; otherwise the top n
// is replaced by sampled children and the cost grows by toll(n). Children of
// size <= 1 are never pushed (they contribute zero cost).
void step(chain_state& state, const prr_spec& spec, trial_rng& rng);

// Runs the chain from (1, <n*>) to termination; returns total cost C_tau.
// Termination is a.s. since child sizes sum to at most n-1; a defensive cap
// of 1e9 transitions raises RuntimeCapExceeded.
double run_trial(const prr_spec& spec, long long nstar, trial_rng& rng);

// Exact cost distribution of T(n) for small n, by bottom-up convolution of
// child distributions. Probabilities are exact rationals; cost values are
// doubles (exact for integer tolls). Errors: TooLarge for n > 14.
using cost_dist = std::map<double, rational>;
cost_dist exact_cost_distribution(const prr_spec& spec, long long n);

// Pr[C_tau >= kappa], exactly.
rational exact_tail(const prr_spec& spec, long long nstar, double kappa);

} // namespace tailbound::prr
