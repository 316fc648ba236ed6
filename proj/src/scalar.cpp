#include "toda_crystal/scalar.hpp"

#include <stdexcept>

namespace toda_crystal {

Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  auto valid_int = [](std::string_view v) {
    if (v.empty()) return false;
    std::size_t i = (v[0] == '-' || v[0] == '+') ? 1 : 0;
    if (i == v.size()) return false;
    for (; i < v.size(); ++i)
      if (v[i] < '0' || v[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den.front() == '-' ||
      den.front() == '+')
    throw std::invalid_argument("malformed rational: '" + s + "'");
  mpz_class n(num.front() == '+' ? num.substr(1) : num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  Scalar out(n, d);
  out.canonicalize();
  return out;
}

std::string to_string(const Scalar& x) { return x.get_str(); }

Scalar power(const Scalar& base, long exponent) {
  if (exponent == 0) return Scalar(1);
  if (base == 0) {
    if (exponent < 0) throw std::domain_error("zero to a negative power");
    return Scalar(0);
  }
  const unsigned long e =
      static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Scalar out = exponent < 0 ? Scalar(den, num) : Scalar(num, den);
  out.canonicalize();
  return out;
}

void require_valid_p(const Scalar& p) {
  if (!(p > 0 && p < 1))
    throw std::invalid_argument("p must satisfy 0 < p < 1, got " + to_string(p));
}

}  // namespace toda_crystal
