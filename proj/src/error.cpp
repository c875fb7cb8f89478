#include "tailbound/error.hpp"

namespace tailbound {

const char* errc_name(errc c) {
    switch (c) {
    case errc::syntax_error: return "SyntaxError";
    case errc::non_linear: return "NonLinear";
    case errc::domain_error: return "DomainError";
    case errc::empty_expr: return "EmptyExpr";
    case errc::non_positive_leading_coefficient: return "NonPositiveLeadingCoefficient";
    case errc::zero_expr: return "ZeroExpr";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::too_large: return "TooLarge";
    case errc::terminal_state: return "TerminalState";
    case errc::runtime_cap_exceeded: return "RuntimeCapExceeded";
    case errc::unsupported_shape: return "UnsupportedShape";
    case errc::not_reducible: return "NotReducible";
    case errc::trivial_bound: return "TrivialBound";
    case errc::kappa_below_f: return "KappaBelowF";
    case errc::bad_distribution: return "BadDistribution";
    case errc::non_incremental: return "NonIncremental";
    case errc::no_branch_covers: return "NoBranchCovers";
    case errc::cap_exceeded: return "CapExceeded";
    case errc::infeasible: return "Infeasible";
    case errc::residual_check_failed: return "ResidualCheckFailed";
    case errc::unknown_reference: return "UnknownReference";
    case errc::overflow: return "Overflow";
    case errc::io_error: return "IOError";
    }
    return "Error";
}

} // namespace tailbound
