#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "toda_crystal/scalar.hpp"

namespace toda_crystal {

/// Truncation caps for a series in Q, t_1..t_K and th_1..th_K.
///
/// NQ caps the exponent of Q; D caps the total degree in the t and th
/// variables jointly. Time variables with index above K are frozen to zero.
struct SeriesContext {
  int K = 1;
  int D = 0;
  int NQ = 0;

  /// Throws std::invalid_argument unless K >= 1, D >= 0, NQ >= 0.
  void validate() const;
  int num_slots() const noexcept { return 1 + 2 * K; }
  friend bool operator==(const SeriesContext&, const SeriesContext&) = default;
};

enum class VarFamily { kQ, kT, kTHat };

struct Variable {
  VarFamily family = VarFamily::kQ;
  int index = 0;

  static Variable q() { return {VarFamily::kQ, 0}; }
  static Variable t(int k) { return {VarFamily::kT, k}; }
  static Variable t_hat(int k) { return {VarFamily::kTHat, k}; }
};

/// Exponent vector laid out as (e_Q; a_1..a_K; ah_1..ah_K).
using Exponents = std::vector<int>;

/// Canonical monomial order: Q exponent, then total time degree, then the
/// time exponents in descending lexicographic order (t1^2 before t1 t2).
struct MonomialOrder {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

int time_degree(const Exponents& e) noexcept;

/// Multivariate polynomial over Scalar, truncated to the caps of its context.
///
/// Coefficients outside the caps are never stored and zero coefficients are
/// pruned. Besides the caps, a series tracks the box on which its stored
/// coefficients are known to be exact: coefficients with e_Q <= exact_q() and
/// time degree <= exact_degree(). The box shrinks under differentiation
/// and propagates through products using valuations, so anything compared
/// outside it is known to be contaminated by truncation.
class TruncatedSeries {
public:
  using TermMap = std::map<Exponents, Scalar, MonomialOrder>;

  explicit TruncatedSeries(SeriesContext ctx);

  static TruncatedSeries constant(SeriesContext ctx, const Scalar& c);
  static TruncatedSeries variable(SeriesContext ctx, Variable v,
                                  const Scalar& coeff = 1);
  static TruncatedSeries monomial(SeriesContext ctx, Exponents e,
                                  const Scalar& coeff);

  const SeriesContext& context() const noexcept { return ctx_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Scalar coefficient(const Exponents& e) const;
  Scalar constant_term() const;

  /// Adds c at exponent e; silently ignored when e lies beyond the caps.
  void add_term(const Exponents& e, const Scalar& c);

  int exact_q() const noexcept { return exact_q_; }
  int exact_degree() const noexcept { return exact_degree_; }
  bool is_exact_at(const Exponents& e) const noexcept;
  /// Restricts the exact box; it never grows.
  TruncatedSeries& shrink_exact_box(int exact_q, int exact_degree) noexcept {
    exact_q_ = std::min(exact_q_, exact_q);
    exact_degree_ = std::min(exact_degree_, exact_degree);
    return *this;
  }
  /// Lowest Q exponent that may carry a nonzero coefficient.
  int q_valuation() const noexcept;
  /// Lowest time degree that may carry a nonzero coefficient.
  int degree_valuation() const noexcept;

  /// Same K, new caps. Terms beyond the new caps are dropped; the exact box
  /// never grows.
  TruncatedSeries with_context(const SeriesContext& ctx) const;
  /// Multiplies by Q^e (e >= 0).
  TruncatedSeries times_q_power(int e) const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const Scalar& c);
  TruncatedSeries operator-() const;

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
    return a += b;
  }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
    return a -= b;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a,
                                   const TruncatedSeries& b);
  friend TruncatedSeries operator*(TruncatedSeries a, const Scalar& c) {
    return a *= c;
  }
  friend TruncatedSeries operator*(const Scalar& c, TruncatedSeries a) {
    return a *= c;
  }

  /// Same context and identical stored coefficients.
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }

private:
  void require_compatible(const TruncatedSeries& o) const;
  bool within_caps(const Exponents& e) const noexcept;

  SeriesContext ctx_;
  TermMap terms_;
  int exact_q_;
  int exact_degree_;
};

/// exp(f) = sum f^n / n!. Throws std::domain_error if f has a nonzero
/// constant term.
TruncatedSeries series_exp(const TruncatedSeries& f);

/// Formal partial derivative. Throws std::out_of_range for a time index
/// outside 1..K. The result's exact box loses one order in the variable.
TruncatedSeries series_partial(const TruncatedSeries& f, Variable v);

/// Replaces t_k by t_images[k-1] and th_k by that_images[k-1]; Q is kept.
/// Images must live in the same context as f.
TruncatedSeries substitute(const TruncatedSeries& f,
                           std::span<const TruncatedSeries> t_images,
                           std::span<const TruncatedSeries> that_images);

/// "Q^2 t1^1 th3^1"; the Q factor is always present.
std::string monomial_key(const Exponents& e, int K);
/// Inverse of monomial_key. Throws std::invalid_argument.
Exponents parse_monomial_key(std::string_view key, const SeriesContext& ctx);

/// {"Q^0": "1", "Q^1 t1^1": "4/9", ...} in canonical monomial order.
nlohmann::ordered_json to_json(const TruncatedSeries& f);
TruncatedSeries series_from_json(const nlohmann::ordered_json& j,
                                 const SeriesContext& ctx);

}  // namespace toda_crystal
