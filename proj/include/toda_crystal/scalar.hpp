#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace toda_crystal {

/// Exact rational, always kept in canonical reduced form.
using Scalar = mpq_class;

/// Parses "num/den" or an integer. Throws std::invalid_argument on malformed
/// input or a zero denominator.
Scalar parse_scalar(std::string_view text);

/// Canonical "num/den" text; integers print without a denominator.
std::string to_string(const Scalar& x);

/// base^exponent for any integer exponent (base != 0 when exponent < 0).
Scalar power(const Scalar& base, long exponent);

/// q^{half_exponent / 2} for q = p^2, i.e. p^{half_exponent}.
inline Scalar qpow(const Scalar& p, long half_exponent) {
  return power(p, half_exponent);
}

/// Validates 0 < p < 1.
void require_valid_p(const Scalar& p);

}  // namespace toda_crystal
