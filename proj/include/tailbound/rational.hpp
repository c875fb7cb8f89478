#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "tailbound/error.hpp"

namespace tailbound {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline double to_double(const rational& q) { return q.convert_to<double>(); }

// Parses "3/4", "0.75", "-1", "2.5e-1". Decimal and scientific forms are
// converted exactly (powers of ten in the denominator).
rational parse_rational(const std::string& text);

std::string rational_str(const rational& q);

// Exact human form: integer, finite decimal when one exists (denominator
// 2^a * 5^b), otherwise "p/q".
std::string decimal_or_fraction(const rational& q);

// Largest int64 n with n <= q (used for exact sampling lattices).
bool fits_uint64(const bigint& v);

} // namespace tailbound
