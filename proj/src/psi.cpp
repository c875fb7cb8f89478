#include "tailbound/psi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace tailbound {

namespace {
constexpr double kMuDrop = 1e-12; // merge tolerance on coefficients
}

void psi_expr::assign(std::vector<psi_term> terms) {
    std::sort(terms.begin(), terms.end(), [](const psi_term& a, const psi_term& b) {
        if (a.nu != b.nu) return a.nu < b.nu;
        return a.xi < b.xi;
    });
    m_terms.clear();
    for (const auto& t : terms) {
        if (!m_terms.empty() && m_terms.back().nu == t.nu && m_terms.back().xi == t.xi)
            m_terms.back().mu += t.mu;
        else
            m_terms.push_back(t);
    }
    m_terms.erase(std::remove_if(m_terms.begin(), m_terms.end(),
                                 [](const psi_term& t) { return std::fabs(t.mu) < kMuDrop; }),
                  m_terms.end());
}

void psi_expr::add_term(double mu, double nu, int xi) {
    std::vector<psi_term> all = m_terms;
    all.push_back({mu, nu, xi});
    assign(std::move(all));
}

psi_expr psi_expr::operator+(const psi_expr& o) const {
    std::vector<psi_term> all = m_terms;
    all.insert(all.end(), o.m_terms.begin(), o.m_terms.end());
    return psi_expr(std::move(all));
}

psi_expr psi_expr::scaled(double k) const {
    std::vector<psi_term> all = m_terms;
    for (auto& t : all) t.mu *= k;
    return psi_expr(std::move(all));
}

bool psi_expr::operator==(const psi_expr& o) const {
    if (m_terms.size() != o.m_terms.size()) return false;
    for (size_t i = 0; i < m_terms.size(); ++i) {
        const auto& a = m_terms[i];
        const auto& b = o.m_terms[i];
        if (a.xi != b.xi) return false;
        double nscale = std::max({1.0, std::fabs(a.nu), std::fabs(b.nu)});
        if (std::fabs(a.nu - b.nu) > 1e-9 * nscale) return false;
        double scale = std::max({1.0, std::fabs(a.mu), std::fabs(b.mu)});
        if (std::fabs(a.mu - b.mu) > 1e-9 * scale) return false;
    }
    return true;
}

double psi_eval(const psi_expr& psi, double c) {
    if (c <= 0) raise(errc::domain_error, "psi_eval at c <= 0");
    double lc = std::log(c);
    double out = 0;
    for (const auto& t : psi.terms()) {
        double v = t.mu * std::exp(t.nu * lc);
        if (t.xi) v *= lc;
        out += v;
    }
    return out;
}

int psi_sign(const psi_expr& psi, double c) {
    if (psi.is_zero()) return 0;
    if (c <= 0) raise(errc::domain_error, "psi_sign at c <= 0");
    double lc = std::log(c);
    double numax = psi.terms().front().nu;
    for (const auto& t : psi.terms()) numax = std::max(numax, t.nu);
    double out = 0;
    for (const auto& t : psi.terms()) {
        double v = t.mu * std::exp((t.nu - numax) * lc);
        if (t.xi) v *= lc;
        out += v;
    }
    return out > 0 ? 1 : (out < 0 ? -1 : 0);
}

psi_expr psi_derive(const psi_expr& psi) {
    std::vector<psi_term> out;
    for (const auto& t : psi.terms()) {
        if (t.nu != 0) out.push_back({t.mu * t.nu, t.nu - 1, t.xi});
        if (t.xi != 0) out.push_back({t.mu, t.nu - 1, 0});
    }
    return psi_expr(std::move(out));
}

psi_expr psi_simplify_divide(const psi_expr& psi) {
    if (psi.is_zero()) raise(errc::zero_expr, "psi_simplify_divide of zero expression");
    double numin = psi.terms().front().nu; // terms sorted by nu
    std::vector<psi_term> out = psi.terms();
    for (auto& t : out) t.nu -= numin;
    return psi_expr(std::move(out));
}

double psi_at_one(const psi_expr& psi) {
    double out = 0;
    for (const auto& t : psi.terms())
        if (t.xi == 0) out += t.mu;
    return out;
}

namespace {

std::string num_str(double v) {
    char buf[64];
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

} // namespace

std::string print_psi(const psi_expr& psi) {
    if (psi.is_zero()) return "0";
    // print most significant first
    std::vector<psi_term> ts = psi.terms();
    std::reverse(ts.begin(), ts.end());
    std::ostringstream os;
    bool first = true;
    for (const auto& t : ts) {
        double mu = t.mu;
        if (first) {
            if (mu < 0) os << "-";
        } else {
            os << (mu < 0 ? " - " : " + ");
        }
        double a = std::fabs(mu);
        bool have_factor = t.nu != 0 || t.xi != 0;
        bool unit = a == 1.0 && have_factor;
        if (!unit) os << num_str(a);
        if (t.nu != 0) {
            if (!unit) os << "*";
            os << "c^" << num_str(t.nu);
            if (t.xi) os << "*ln(c)";
        } else if (t.xi) {
            if (!unit) os << "*";
            os << "ln(c)";
        }
        first = false;
    }
    return os.str();
}

psi_expr parse_psi(const std::string& s) {
    std::vector<psi_term> terms;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto read_num = [&]() -> double {
        const char* start = s.c_str() + i;
        char* end = nullptr;
        double v = std::strtod(start, &end);
        if (end == start) raise(errc::syntax_error, "expected number in psi expression");
        i += static_cast<size_t>(end - start);
        return v;
    };

    skip_ws();
    if (i >= s.size()) raise(errc::syntax_error, "empty psi expression");
    if (s.compare(i, 1, "0") == 0 && i + 1 == s.size()) return psi_expr();

    bool first = true;
    while (true) {
        skip_ws();
        if (i >= s.size()) break;
        double sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (first && s[i] == '+') raise(errc::syntax_error, "leading +");
            sign = s[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            raise(errc::syntax_error, "expected + or - between psi terms");
        }
        double mu = 1;
        double nu = 0;
        int xi = 0;
        bool any = false;
        while (true) {
            skip_ws();
            if (i < s.size() && s.compare(i, 2, "c^") == 0) {
                i += 2;
                nu += read_num();
                any = true;
            } else if (i < s.size() && s.compare(i, 5, "ln(c)") == 0) {
                i += 5;
                xi += 1;
                any = true;
            } else if (i < s.size() && s[i] == 'c' &&
                       (i + 1 == s.size() || s[i + 1] != '^')) {
                i += 1;
                nu += 1;
                any = true;
            } else if (i < s.size() &&
                       (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
                mu *= read_num();
                any = true;
            } else {
                break;
            }
            skip_ws();
            if (i < s.size() && s[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        if (!any) raise(errc::syntax_error, "empty psi term");
        if (xi > 1) raise(errc::syntax_error, "ln power above 1");
        terms.push_back({sign * mu, nu, xi});
        first = false;
    }
    return psi_expr(std::move(terms));
}

} // namespace tailbound
