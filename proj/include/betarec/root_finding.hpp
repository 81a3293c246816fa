#pragma once

#include <functional>
#include <vector>

#include "betarec/bounded_real.hpp"

namespace betarec {

/// Bisection on a sign change of f over [lo, hi]; returns the midpoint of the
/// final bracket, whose width is at most 2 * tol.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Interval bisection. f must be certainly negative at lo and certainly
/// positive at hi (or the reverse). Returns an enclosure of a root, refined
/// until its width reaches 2^-prec relative or the sign at a midpoint cannot
/// be decided.
BoundedReal bisect_root_enclosure(const std::function<BoundedReal(const BoundedReal&)>& f,
                                  const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);

/// Evaluates c[0] x^d + c[1] x^(d-1) + ... + c[d] by Horner's rule.
BoundedReal eval_polynomial(const std::vector<mpz_class>& coefficients, const BoundedReal& x);

}  // namespace betarec
