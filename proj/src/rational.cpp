#include "tailbound/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace tailbound {

namespace {

bigint pow10(long k) {
    bigint r = 1;
    for (long i = 0; i < k; ++i) r *= 10;
    return r;
}

} // namespace

rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) raise(errc::syntax_error, "empty number");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        rational num = parse_rational(s.substr(0, slash));
        rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) raise(errc::syntax_error, "zero denominator in '" + text + "'");
        return num / den;
    }

    bool neg = false;
    size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    long scale = 0; // value = digits * 10^(-scale) * 10^exp
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++scale;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            break;
        } else {
            raise(errc::syntax_error, "bad number '" + text + "'");
        }
    }
    long exp10 = 0;
    if (i < s.size()) { // exponent part
        ++i;
        char* end = nullptr;
        exp10 = std::strtol(s.c_str() + i, &end, 10);
        if (end != s.c_str() + s.size()) raise(errc::syntax_error, "bad exponent in '" + text + "'");
    }
    if (!seen_digit) raise(errc::syntax_error, "bad number '" + text + "'");

    // strip leading zeros so the digit string is never read as octal
    while (digits.size() > 1 && digits.front() == '0') digits.erase(digits.begin());
    bigint mant(digits.empty() ? "0" : digits);
    rational r(mant, 1);
    long net = exp10 - scale;
    if (net > 0)
        r *= rational(pow10(net), 1);
    else if (net < 0)
        r /= rational(pow10(-net), 1);
    if (neg) r = -r;
    return r;
}

std::string rational_str(const rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

std::string decimal_or_fraction(const rational& q) {
    bigint den = denominator(q);
    int twos = 0, fives = 0;
    bigint d = den;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1 || twos > 18 || fives > 18) return rational_str(q);
    if (den == 1) return rational_str(q);
    int k = std::max(twos, fives); // q = m / 10^k exactly
    bigint m = numerator(q) * pow10(k) / den;
    bool neg = m < 0;
    if (neg) m = -m;
    std::ostringstream os;
    os << m;
    std::string digits = os.str();
    while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - k, '.');
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return (neg ? "-" : "") + digits;
}

bool fits_uint64(const bigint& v) {
    return v >= 0 && v <= bigint(UINT64_MAX);
}

} // namespace tailbound
