#include "moran/exact.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace moran {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw argument_error("cannot convert non-finite double to rational");
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw argument_error("empty numeric literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (is_zero(den)) throw argument_error("zero denominator in '" + text + "'");
    return num / den;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = (s[pos] == '-');
    ++pos;
  }

  // Split mantissa and optional exponent.
  std::string mant = s.substr(pos);
  long exp10 = 0;
  auto epos = mant.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string es = mant.substr(epos + 1);
    mant = mant.substr(0, epos);
    if (es.empty()) throw argument_error("bad exponent in '" + text + "'");
    exp10 = std::strtol(es.c_str(), nullptr, 10);
  }

  std::string digits = mant;
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (!all_digits(digits)) throw argument_error("bad numeric literal '" + text + "'");

  BigInt n(digits, 10);
  if (negative) n = -n;
  Rational r(n);
  BigInt pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  if (exp10 >= 0)
    r *= Rational(pow10);
  else
    r /= Rational(pow10);
  return r;
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_string(const BigInt& x) { return x.get_str(); }

BigInt binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace moran
