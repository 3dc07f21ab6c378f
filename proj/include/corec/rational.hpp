#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace corec {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = mpq_class;

/// Accepts integers, `p/q` and decimal strings (`-1.25`); the result is
/// exact and canonical. Throws Error(InvalidArgument) on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

/// n/d in lowest terms; mpq_class(n, d) alone does not canonicalize.
inline Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::size_t hash_value(const Rational& value) noexcept;

}  // namespace corec
