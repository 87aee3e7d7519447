#pragma once

#include <optional>
#include <vector>

#include "moran/exact.hpp"

namespace moran {

/**
 * Exact characteristic polynomial det(xI - A) of a rational matrix by the
 * Faddeev-LeVerrier recurrence.  Returns monic coefficients c[0..n] with
 * c[0] = 1, c[k] the coefficient of x^{n-k}.
 */
std::vector<Rational> charpoly(const std::vector<std::vector<Rational>>& A);

/**
 * True when poly factors exactly as prod (x - r) over `roots` (with
 * multiplicity, |roots| = degree): repeated exact synthetic division with
 * zero remainders.
 */
bool poly_has_exact_roots(const std::vector<Rational>& poly, const std::vector<Rational>& roots);

/// Verifies that `roots` is exactly the spectrum of A, multiplicities included.
bool verify_spectrum_exact(const std::vector<std::vector<Rational>>& A,
                           const std::vector<Rational>& roots);

/// Nearest rational with denominator <= max_den (continued fractions).
Rational rationalize(double x, unsigned long max_den = 1000000);

/**
 * Attempts an exact rational spectrum of A: candidate roots from the double
 * eigensolver, rationalized and then verified symbolically against the exact
 * characteristic polynomial.  Empty when some root is not (detectably) a
 * small rational or complex.
 */
std::optional<std::vector<Rational>> exact_rational_spectrum(
    const std::vector<std::vector<Rational>>& A);

/// Geometric multiplicity of an exact eigenvalue: dim ker(A - lambda I).
int geometric_multiplicity(const std::vector<std::vector<Rational>>& A, const Rational& lambda);

}  // namespace moran
