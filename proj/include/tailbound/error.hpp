#pragma once

#include <stdexcept>
#include <string>

namespace tailbound {

enum class errc {
    syntax_error,
    non_linear,
    domain_error,
    empty_expr,
    non_positive_leading_coefficient,
    zero_expr,
    invariant_violation,
    too_large,
    terminal_state,
    runtime_cap_exceeded,
    unsupported_shape,
    not_reducible,
    trivial_bound,
    kappa_below_f,
    bad_distribution,
    non_incremental,
    no_branch_covers,
    cap_exceeded,
    infeasible,
    residual_check_failed,
    unknown_reference,
    overflow,
    io_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
  public:
    error(errc code, std::string msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), m_code(code) {}

    errc code() const { return m_code; }

  private:
    errc m_code;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) { throw error(code, msg); }

} // namespace tailbound
