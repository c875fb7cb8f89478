#include "tailbound/linlog.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace tailbound {

const char* basis_name(basis b) {
    switch (b) {
    case basis::CONST: return "1";
    case basis::LN_N: return "ln(n)";
    case basis::N: return "n";
    case basis::N_LN_N: return "n*ln(n)";
    }
    return "?";
}

bool linlog_expr::is_zero() const {
    for (const auto& c : m_coef)
        if (c != 0) return false;
    return true;
}

linlog_expr linlog_expr::operator+(const linlog_expr& o) const {
    linlog_expr r;
    for (int i = 0; i < 4; ++i) r.m_coef[i] = m_coef[i] + o.m_coef[i];
    return r;
}

linlog_expr linlog_expr::operator-(const linlog_expr& o) const {
    linlog_expr r;
    for (int i = 0; i < 4; ++i) r.m_coef[i] = m_coef[i] - o.m_coef[i];
    return r;
}

linlog_expr linlog_expr::scaled(const rational& k) const {
    linlog_expr r;
    for (int i = 0; i < 4; ++i) r.m_coef[i] = m_coef[i] * k;
    return r;
}

namespace {

struct token {
    enum kind { NUM, VAR_N, LN_N_TOK, PLUS, MINUS, STAR, END } k;
    rational value;
};

class lexer {
  public:
    explicit lexer(const std::string& s) : m_s(s) {}

    // end of a decimal/scientific literal starting at i
    size_t scan_number(size_t i) const {
        size_t j = i;
        while (j < m_s.size() &&
               (std::isdigit(static_cast<unsigned char>(m_s[j])) || m_s[j] == '.'))
            ++j;
        if (j < m_s.size() && (m_s[j] == 'e' || m_s[j] == 'E')) {
            size_t k = j + 1;
            if (k < m_s.size() && (m_s[k] == '+' || m_s[k] == '-')) ++k;
            if (k < m_s.size() && std::isdigit(static_cast<unsigned char>(m_s[k]))) {
                while (k < m_s.size() && std::isdigit(static_cast<unsigned char>(m_s[k]))) ++k;
                j = k;
            }
        }
        return j;
    }

    token next() {
        while (m_i < m_s.size() && std::isspace(static_cast<unsigned char>(m_s[m_i]))) ++m_i;
        if (m_i >= m_s.size()) return {token::END, 0};
        char c = m_s[m_i];
        if (c == '+') { ++m_i; return {token::PLUS, 0}; }
        if (c == '-') { ++m_i; return {token::MINUS, 0}; }
        if (c == '*') { ++m_i; return {token::STAR, 0}; }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t j = scan_number(m_i);
            rational v = parse_rational(m_s.substr(m_i, j - m_i));
            m_i = j;
            // fraction sugar p/q (exact coefficients that have no finite
            // decimal form print this way)
            if (m_i < m_s.size() && m_s[m_i] == '/' && m_i + 1 < m_s.size() &&
                std::isdigit(static_cast<unsigned char>(m_s[m_i + 1]))) {
                size_t k2 = scan_number(m_i + 1);
                rational den = parse_rational(m_s.substr(m_i + 1, k2 - m_i - 1));
                if (den == 0) raise(errc::syntax_error, "division by zero");
                v /= den;
                m_i = k2;
            }
            return {token::NUM, v};
        }
        if (c == 'n') {
            ++m_i;
            return {token::VAR_N, 0};
        }
        if (m_s.compare(m_i, 3, "ln(") == 0) {
            size_t j = m_i + 3;
            while (j < m_s.size() && std::isspace(static_cast<unsigned char>(m_s[j]))) ++j;
            if (j < m_s.size() && m_s[j] == 'n') {
                ++j;
                while (j < m_s.size() && std::isspace(static_cast<unsigned char>(m_s[j]))) ++j;
                if (j < m_s.size() && m_s[j] == ')') {
                    m_i = j + 1;
                    return {token::LN_N_TOK, 0};
                }
            }
            raise(errc::syntax_error, "expected ln(n)");
        }
        raise(errc::syntax_error, std::string("unexpected character '") + c + "'");
    }

  private:
    const std::string& m_s;
    size_t m_i = 0;
};

// One product of factors: scalar * optional n-power * optional ln-power.
struct term_acc {
    rational scalar = 1;
    int n_pow = 0;
    int ln_pow = 0;

    basis to_basis() const {
        if (n_pow > 1 || ln_pow > 1 || (n_pow + ln_pow) > 2)
            raise(errc::non_linear, "term outside the n / ln(n) / n*ln(n) basis");
        if (n_pow == 1 && ln_pow == 1) return basis::N_LN_N;
        if (n_pow == 1) return basis::N;
        if (ln_pow == 1) return basis::LN_N;
        return basis::CONST;
    }
};

} // namespace

linlog_expr parse_linlog(const std::string& text) {
    lexer lx(text);
    linlog_expr out;
    token t = lx.next();
    if (t.k == token::END) raise(errc::syntax_error, "empty expression");

    bool expect_term = true;
    rational sign = 1;
    term_acc cur;
    bool in_term = false;

    auto flush = [&]() {
        if (!in_term) raise(errc::syntax_error, "dangling operator");
        basis b = cur.to_basis();
        out.set_coef(b, out.coef(b) + sign * cur.scalar);
        cur = term_acc{};
        in_term = false;
    };

    while (true) {
        if (expect_term) {
            // optional unary sign before the first factor
            while (t.k == token::MINUS || t.k == token::PLUS) {
                if (t.k == token::MINUS) sign = -sign;
                t = lx.next();
            }
            // factors separated by '*'
            while (true) {
                if (t.k == token::NUM) {
                    cur.scalar *= t.value;
                } else if (t.k == token::VAR_N) {
                    cur.n_pow += 1;
                } else if (t.k == token::LN_N_TOK) {
                    cur.ln_pow += 1;
                } else {
                    raise(errc::syntax_error, "expected a factor");
                }
                in_term = true;
                t = lx.next();
                if (t.k == token::STAR) {
                    t = lx.next();
                    continue;
                }
                break;
            }
            flush();
            expect_term = false;
            sign = 1;
        } else {
            if (t.k == token::END) break;
            if (t.k == token::PLUS) {
                sign = 1;
            } else if (t.k == token::MINUS) {
                sign = -1;
            } else {
                raise(errc::syntax_error, "expected + or -");
            }
            t = lx.next();
            expect_term = true;
        }
    }
    return out;
}

std::string print_linlog(const linlog_expr& e) {
    static const basis order[4] = {basis::N_LN_N, basis::N, basis::LN_N, basis::CONST};
    std::ostringstream os;
    bool first = true;
    for (basis b : order) {
        rational c = e.coef(b);
        if (c == 0) continue;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        rational a = c < 0 ? rational(-c) : c;
        bool unit = a == 1 && b != basis::CONST;
        if (!unit) os << decimal_or_fraction(a);

        if (b != basis::CONST) {
            if (!unit) os << "*";
            os << basis_name(b);
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

double eval_linlog(const linlog_expr& e, double n, zero_convention zc) {
    double out = to_double(e.coef(basis::CONST));
    bool has_log = e.coef(basis::LN_N) != 0 || e.coef(basis::N_LN_N) != 0;
    if (n < 0) raise(errc::domain_error, "negative n");
    if (n < 1.0) {
        if (zc == zero_convention::forbid && has_log)
            raise(errc::domain_error, "log basis evaluated below n = 1");
        if (n == 0.0) return out; // n, ln n, n*ln n all taken as 0 at n = 0
    }
    double ln = n > 0 ? std::log(n) : 0.0;
    out += to_double(e.coef(basis::LN_N)) * ln;
    out += to_double(e.coef(basis::N)) * n;
    out += to_double(e.coef(basis::N_LN_N)) * n * ln;
    return out;
}

basis leading_term(const linlog_expr& e) {
    static const basis order[4] = {basis::N_LN_N, basis::N, basis::LN_N, basis::CONST};
    for (basis b : order) {
        if (e.coef(b) != 0) {
            if (e.coef(b) < 0)
                raise(errc::non_positive_leading_coefficient, print_linlog(e));
            return b;
        }
    }
    raise(errc::empty_expr, "leading term of zero expression");
}

} // namespace tailbound
