#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tailbound/loop/spec.hpp"
#include "tailbound/prr/spec.hpp"

namespace tailbound::oracle {

struct tail_estimate {
    double kappa = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    std::uint64_t cap_exceeded = 0; // never folded into hits
    double point = 0;
    double wilson_upper_99 = 0;
};

// One-sided 99% Wilson upper limit for hits/trials.
double wilson_upper_99(std::uint64_t hits, std::uint64_t trials);

// One simulation pass computing hit counts for every kappa; deterministic
// given the seed (per-trial derived streams).
std::vector<tail_estimate> estimate_tail(const prr::prr_spec& spec, long long nstar,
                                         const std::vector<double>& kappas,
                                         std::uint64_t trials, std::uint64_t seed);

std::vector<tail_estimate> estimate_tail(const loop::loop_spec& spec,
                                         const std::vector<double>& kappas,
                                         std::uint64_t trials, std::uint64_t seed,
                                         std::uint64_t cap = loop::kDefaultIterationCap);

enum class dominance { PASS, WARN, FAIL };

const char* dominance_name(dominance d);

// PASS iff the point estimate stays below the bound; WARN when only the
// Wilson upper limit crosses it.
dominance check_dominance(double bound_value, const tail_estimate& est);

// Stored reference constants from the literature comparison (lookup only).
// Errors: UnknownReference.
double karp_reference(const std::string& name, const std::string& tail_id);

} // namespace tailbound::oracle
