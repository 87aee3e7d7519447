#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include "moran/exact.hpp"

namespace moran {

// Numeric-field abstraction: computations run either in exact rationals or
// in double precision, selected by template parameter.
template <class F>
struct field_traits;

template <>
struct field_traits<double> {
  static constexpr bool exact = false;
  static double from_long(long long v) { return static_cast<double>(v); }
  static double from_rational(const Rational& r) { return to_double(r); }
  static bool is_zero(double x) { return x == 0.0; }
  static double abs(double x) { return std::fabs(x); }
};

template <>
struct field_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_long(long long v) { return rat(v); }
  static Rational from_rational(const Rational& r) { return r; }
  static bool is_zero(const Rational& x) { return moran::is_zero(x); }
  static Rational abs(const Rational& x) { return ::abs(x); }
};

template <>
struct field_traits<std::complex<double>> {
  static constexpr bool exact = false;
  static std::complex<double> from_long(long long v) { return {static_cast<double>(v), 0.0}; }
  static std::complex<double> from_rational(const Rational& r) { return {to_double(r), 0.0}; }
  static bool is_zero(const std::complex<double>& x) { return x == std::complex<double>(0.0, 0.0); }
  static double abs(const std::complex<double>& x) { return std::abs(x); }
};

/// Increasing factorial x_(n) = x (x+1) ... (x+n-1), with x_(0) = 1 even for x = 0.
template <class F>
F rising(F x, int n) {
  if (n < 0) throw argument_error("rising: negative order");
  F acc = field_traits<F>::from_long(1);
  for (int k = 0; k < n; ++k) acc *= x + field_traits<F>::from_long(k);
  return acc;
}

/// Decreasing factorial x_[n] = x (x-1) ... (x-n+1), with x_[0] = 1 even for x = 0.
template <class F>
F falling(F x, int n) {
  if (n < 0) throw argument_error("falling: negative order");
  F acc = field_traits<F>::from_long(1);
  for (int k = 0; k < n; ++k) acc *= x - field_traits<F>::from_long(k);
  return acc;
}

template <class F>
F pow_int(F x, int n) {
  if (n < 0) throw argument_error("pow_int: negative exponent");
  F acc = field_traits<F>::from_long(1);
  for (int k = 0; k < n; ++k) acc *= x;
  return acc;
}

// GMP expression templates materialise to Rational before entering the
// generic routines.
template <class T, class U>
  requires(!std::is_same_v<__gmp_expr<T, U>, Rational>)
Rational rising(const __gmp_expr<T, U>& x, int n) {
  return rising(Rational(x), n);
}
template <class T, class U>
  requires(!std::is_same_v<__gmp_expr<T, U>, Rational>)
Rational falling(const __gmp_expr<T, U>& x, int n) {
  return falling(Rational(x), n);
}
template <class T, class U>
  requires(!std::is_same_v<__gmp_expr<T, U>, Rational>)
Rational pow_int(const __gmp_expr<T, U>& x, int n) {
  return pow_int(Rational(x), n);
}

}  // namespace moran
