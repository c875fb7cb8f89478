#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tailbound/rational.hpp"
#include "tailbound/rng.hpp"
#include "tailbound/toml.hpp"

namespace tailbound::loop {

// Finite discrete distribution with exact probabilities summing to 1.
struct discrete_dist {
    struct atom {
        rational value; // scalar payload (projections); unused for steps
        rational prob;
    };
    std::vector<atom> atoms;

    void validate() const; // BadDistribution unless probs positive, sum 1
};

// a . x <= b  (">=" rows are normalized by negation at parse time)
struct linear_ineq {
    std::vector<rational> coef;
    rational bound;

    bool satisfied(const std::vector<rational>& x) const;
};

struct branch_step {
    rational prob;
    std::vector<rational> delta; // increment vector over the program variables
};

struct loop_branch {
    std::vector<linear_ineq> region; // empty = TRUE
    std::vector<branch_step> steps;
};

struct loop_spec {
    std::string name;
    std::vector<std::string> vars;
    std::vector<linear_ineq> guard;
    std::vector<loop_branch> branches;
    std::vector<rational> init;

    bool in_guard(const std::vector<rational>& x) const;
    // first branch whose region contains x, in file order; -1 if none
    int branch_for(const std::vector<rational>& x) const;
};

// Errors: SyntaxError; BadDistribution (probs not summing to 1);
// NonIncremental (assignment not of the x := x + e shape is unrepresentable
// here, so the check guards the delta arity); InvariantViolation for region
// gaps detected on the sampled grid.
loop_spec parse_loop_spec(const std::string& file_bytes);
loop_spec parse_loop_spec(const toml::document& doc);

struct loop_trace {
    std::uint64_t iterations = 0;
    std::vector<rational> final_valuation;
    bool cap_exceeded = false; // reported distinctly, never as termination
};

constexpr std::uint64_t kDefaultIterationCap = 100000000ULL;

// While x in G: pick the first covering branch, sample an increment, add it.
// Errors: NoBranchCovers on a region gap at the reached valuation.
loop_trace run_trial(const loop_spec& spec, trial_rng& rng,
                     std::uint64_t cap = kDefaultIterationCap);

// Pushforward of delta |-> <eta, delta> per branch for a linear functional
// eta over the program variables (the offset cancels in differences).
std::vector<discrete_dist> branch_delta_projection(const loop_spec& spec,
                                                   const std::vector<rational>& eta_coef);

} // namespace tailbound::loop
