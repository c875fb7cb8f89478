#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tailbound/linlog.hpp"
#include "tailbound/rational.hpp"
#include "tailbound/toml.hpp"

namespace tailbound::prr {

// How an instance of size n splits into recursive calls.
//   UNIFORM:       one child, uniform on {0..n-1}
//   HALFSPLIT:     one child, Pr[h=i] = multiplicity of i in
//                  {ceil(n/2)..n-1} (+) {floor(n/2)..n-1}, over n
//   MIXED(gamma):  gamma-blend of HALFSPLIT and UNIFORM
//   TWOCALL_SPLIT: children (i, n-1-i), pivot i uniform on {0..n-1};
//                  verify/simulate only
enum class shape_kind { UNIFORM, HALFSPLIT, MIXED, TWOCALL_SPLIT };

struct recursion_shape {
    shape_kind kind = shape_kind::UNIFORM;
    rational gamma = 0; // meaningful for MIXED

    // blend weight of the halfsplit part: 1 for HALFSPLIT, 0 for UNIFORM
    rational halfsplit_weight() const;
    int call_count() const { return kind == shape_kind::TWOCALL_SPLIT ? 2 : 1; }
};

constexpr long long kSymbolicNStar = -1;

struct prr_spec {
    std::string name;
    linlog_expr toll;   // a(n), nonnegative on n >= 1
    recursion_shape shape;
    linlog_expr f;      // upper bound on E[T(n)]
    linlog_expr kappa;  // tail threshold expression
    long long nstar = kSymbolicNStar; // kSymbolicNStar = symbolic
    int partition_count = 0;          // B; 0 = auto schedule

    bool symbolic_nstar() const { return nstar == kSymbolicNStar; }
};

// Parses and validates the [prr] spec-file section. Errors: SyntaxError,
// InvariantViolation (negative toll, kappa < f at n*, gamma outside [0,1]).
prr_spec parse_prr_spec(const std::string& file_bytes);
prr_spec parse_prr_spec(const toml::document& doc);

// Discrete distribution over child-size tuples for instance size n >= 2;
// masses are exact rationals summing to 1.
struct child_outcome {
    std::vector<long long> sizes;
    rational prob;
};
std::vector<child_outcome> child_distribution(const recursion_shape& shape, long long n);

} // namespace tailbound::prr
