#pragma once

#include <array>
#include <optional>
#include <string>

#include "tailbound/rational.hpp"

namespace tailbound {

// Basis for the expression grammar E ::= c | E + E | c*E | n*ln(n) | ln(n) | n,
// ordered by growth.
enum class basis : int { CONST = 0, LN_N = 1, N = 2, N_LN_N = 3 };

const char* basis_name(basis b);

// Linear combination over {1, ln n, n, n ln n} with exact coefficients.
// Zero coefficients are kept absent from the printed form; the canonical
// in-memory form is just the four slots.
class linlog_expr {
  public:
    linlog_expr() = default;

    static linlog_expr constant(const rational& c) {
        linlog_expr e;
        e.m_coef[0] = c;
        return e;
    }

    const rational& coef(basis b) const { return m_coef[static_cast<int>(b)]; }
    void set_coef(basis b, const rational& c) { m_coef[static_cast<int>(b)] = c; }

    bool is_zero() const;
    bool operator==(const linlog_expr& o) const { return m_coef == o.m_coef; }

    linlog_expr operator+(const linlog_expr& o) const;
    linlog_expr operator-(const linlog_expr& o) const;
    linlog_expr scaled(const rational& k) const;

  private:
    std::array<rational, 4> m_coef{}; // CONST, LN_N, N, N_LN_N
};

// Parses the expression text syntax (External Interfaces): decimal or
// scientific numbers, tokens n / ln(n) / n*ln(n), binary + and -, scalar *.
linlog_expr parse_linlog(const std::string& text);

std::string print_linlog(const linlog_expr& e);

// Exact-in-spirit evaluation at real n >= 1 (ln 1 = 0). With
// zero_convention::allow, n in [0, 1) evaluates every n-dependent basis
// element to 0 (the 0*ln 0 := 0 convention extended to the basis); without
// it, such n raises DomainError when a log basis is present.
enum class zero_convention { forbid, allow };

double eval_linlog(const linlog_expr& e, double n, zero_convention zc = zero_convention::forbid);

// Most significant basis element with a nonzero coefficient
// (order N_LN_N > N > LN_N > CONST). Errors: EmptyExpr,
// NonPositiveLeadingCoefficient.
basis leading_term(const linlog_expr& e);

} // namespace tailbound
