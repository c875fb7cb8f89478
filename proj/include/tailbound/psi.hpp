#pragma once

#include <string>
#include <vector>

#include "tailbound/error.hpp"

namespace tailbound {

// One term mu * c^nu * ln^xi(c) of the closed family of Lemma-form
// expressions; xi is 0 or 1 and the family is closed under d/dc.
struct psi_term {
    double mu = 0;
    double nu = 0;
    int xi = 0;
};

// Canonically ordered (nu, xi) term list, merged, near-zero terms dropped.
class psi_expr {
  public:
    psi_expr() = default;
    explicit psi_expr(std::vector<psi_term> terms) { assign(std::move(terms)); }

    static psi_expr constant(double v) { return psi_expr({{v, 0.0, 0}}); }

    const std::vector<psi_term>& terms() const { return m_terms; }
    bool is_zero() const { return m_terms.empty(); }
    size_t size() const { return m_terms.size(); }

    void add_term(double mu, double nu, int xi);

    psi_expr operator+(const psi_expr& o) const;
    psi_expr scaled(double k) const;

    bool operator==(const psi_expr& o) const;

  private:
    void assign(std::vector<psi_term> terms);
    std::vector<psi_term> m_terms;
};

// Sum of mu_i * c^{nu_i} * ln^{xi_i} c at c. Values of c below 1 are accepted
// down to 0 (exclusive); overflow saturates to +-inf.
double psi_eval(const psi_expr& psi, double c);

// Sign-safe evaluation for very large c: factors out the dominant c-power so
// the result's sign is exact even where psi_eval would overflow.
int psi_sign(const psi_expr& psi, double c);

// Term-wise derivative, re-canonicalized:
// d/dc [mu c^nu ln^xi c] = mu*nu c^(nu-1) ln^xi c + xi*mu c^(nu-1).
psi_expr psi_derive(const psi_expr& psi);

// psi / c^a with a = min exponent, so the result has minimal exponent 0.
// Preserves sign on (0, inf), hence separability and roots on [1, inf).
psi_expr psi_simplify_divide(const psi_expr& psi);

// Exact value at c = 1 (log terms vanish): sum of mu_i over xi_i = 0 terms.
double psi_at_one(const psi_expr& psi);

std::string print_psi(const psi_expr& psi);
psi_expr parse_psi(const std::string& text);

} // namespace tailbound
