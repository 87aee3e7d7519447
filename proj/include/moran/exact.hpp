#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "moran/errors.hpp"

namespace moran {

// Exact scalar types. GMP supplies the arbitrary-precision substrate;
// everything downstream only relies on the operators used here.
using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt big(long long v) { return BigInt(static_cast<long>(v)); }

inline Rational rat(long long num, long long den = 1) {
  if (den == 0) throw argument_error("rational with zero denominator");
  Rational r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

/// Exact conversion of a double into a rational (doubles are dyadic).
Rational rational_from_double(double x);

/// Parse "-12", "3.25", "1e-3" or "3/14" into an exact rational.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& x);
std::string to_string(const BigInt& x);

/// Binomial coefficient C(n, k) in exact arithmetic; 0 when k < 0 or k > n.
BigInt binomial(long n, long k);

}  // namespace moran
