#include "toda_crystal/series.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace toda_crystal {

void SeriesContext::validate() const {
  if (K < 1 || D < 0 || NQ < 0)
    throw std::invalid_argument("series context requires K >= 1, D >= 0, NQ >= 0");
}

int time_degree(const Exponents& e) noexcept {
  return std::accumulate(e.begin() + 1, e.end(), 0);
}

bool MonomialOrder::operator()(const Exponents& a, const Exponents& b) const {
  if (a[0] != b[0]) return a[0] < b[0];
  const int da = time_degree(a), db = time_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin() + 1, b.end(), a.begin() + 1,
                                      a.end());
}

TruncatedSeries::TruncatedSeries(SeriesContext ctx)
    : ctx_(ctx), exact_q_(ctx.NQ), exact_degree_(ctx.D) {
  ctx_.validate();
}

TruncatedSeries TruncatedSeries::constant(SeriesContext ctx, const Scalar& c) {
  TruncatedSeries f(ctx);
  f.add_term(Exponents(ctx.num_slots(), 0), c);
  return f;
}

namespace {

int slot_of(const SeriesContext& ctx, Variable v) {
  switch (v.family) {
    case VarFamily::kQ:
      return 0;
    case VarFamily::kT:
    case VarFamily::kTHat:
      if (v.index < 1 || v.index > ctx.K)
        throw std::out_of_range("time variable index " + std::to_string(v.index) +
                                " outside 1.." + std::to_string(ctx.K));
      return v.family == VarFamily::kT ? v.index : ctx.K + v.index;
  }
  throw std::out_of_range("unknown variable family");
}

}  // namespace

TruncatedSeries TruncatedSeries::variable(SeriesContext ctx, Variable v,
                                          const Scalar& coeff) {
  TruncatedSeries f(ctx);
  Exponents e(ctx.num_slots(), 0);
  e[slot_of(ctx, v)] = 1;
  f.add_term(e, coeff);
  return f;
}

TruncatedSeries TruncatedSeries::monomial(SeriesContext ctx, Exponents e,
                                          const Scalar& coeff) {
  if (static_cast<int>(e.size()) != ctx.num_slots())
    throw std::invalid_argument("exponent vector length mismatch");
  TruncatedSeries f(ctx);
  f.add_term(e, coeff);
  return f;
}

Scalar TruncatedSeries::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0) : it->second;
}

Scalar TruncatedSeries::constant_term() const {
  return coefficient(Exponents(ctx_.num_slots(), 0));
}

bool TruncatedSeries::within_caps(const Exponents& e) const noexcept {
  return e[0] <= ctx_.NQ && time_degree(e) <= ctx_.D;
}

void TruncatedSeries::add_term(const Exponents& e, const Scalar& c) {
  if (c == 0 || !within_caps(e)) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool TruncatedSeries::is_exact_at(const Exponents& e) const noexcept {
  return e[0] <= exact_q_ && time_degree(e) <= exact_degree_;
}

int TruncatedSeries::q_valuation() const noexcept {
  int v = exact_q_ + 1;
  for (const auto& [e, c] : terms_) v = std::min(v, e[0]);
  return v;
}

int TruncatedSeries::degree_valuation() const noexcept {
  int v = exact_degree_ + 1;
  for (const auto& [e, c] : terms_) v = std::min(v, time_degree(e));
  return v;
}

TruncatedSeries TruncatedSeries::with_context(const SeriesContext& ctx) const {
  if (ctx.K != ctx_.K)
    throw std::invalid_argument("with_context cannot change K");
  TruncatedSeries out(ctx);
  for (const auto& [e, c] : terms_) out.add_term(e, c);
  out.exact_q_ = std::min(exact_q_, ctx.NQ);
  out.exact_degree_ = std::min(exact_degree_, ctx.D);
  return out;
}

TruncatedSeries TruncatedSeries::times_q_power(int e) const {
  if (e < 0) throw std::invalid_argument("negative Q power");
  TruncatedSeries out(ctx_);
  for (const auto& [ex, c] : terms_) {
    Exponents shifted = ex;
    shifted[0] += e;
    out.add_term(shifted, c);
  }
  out.exact_q_ = std::min(exact_q_ + e, ctx_.NQ);
  out.exact_degree_ = exact_degree_;
  return out;
}

void TruncatedSeries::require_compatible(const TruncatedSeries& o) const {
  if (!(ctx_ == o.ctx_))
    throw std::invalid_argument("series contexts differ");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  require_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  exact_q_ = std::min(exact_q_, o.exact_q_);
  exact_degree_ = std::min(exact_degree_, o.exact_degree_);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  require_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  exact_q_ = std::min(exact_q_, o.exact_q_);
  exact_degree_ = std::min(exact_degree_, o.exact_degree_);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Scalar& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.require_compatible(b);
  TruncatedSeries out(a.ctx_);
  const int slots = a.ctx_.num_slots();
  Exponents e(slots);
  for (const auto& [ea, ca] : a.terms_) {
    const int da = time_degree(ea);
    for (const auto& [eb, cb] : b.terms_) {
      if (ea[0] + eb[0] > a.ctx_.NQ || da + time_degree(eb) > a.ctx_.D) continue;
      for (int i = 0; i < slots; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  out.exact_q_ = std::min({a.exact_q_ + b.q_valuation(),
                           b.exact_q_ + a.q_valuation(), a.ctx_.NQ});
  out.exact_degree_ = std::min({a.exact_degree_ + b.degree_valuation(),
                                b.exact_degree_ + a.degree_valuation(),
                                a.ctx_.D});
  return out;
}

TruncatedSeries series_exp(const TruncatedSeries& f) {
  if (f.constant_term() != 0)
    throw std::domain_error("series_exp requires a zero constant term");
  const SeriesContext& ctx = f.context();
  TruncatedSeries result = TruncatedSeries::constant(ctx, 1);
  TruncatedSeries term = result;
  // Every term of f raises Q-order plus time degree by at least one.
  for (int n = 1; n <= ctx.NQ + ctx.D + 1; ++n) {
    term = term * f;
    term *= Scalar(1, n);
    if (term.is_zero()) break;
    result += term;
  }
  return result.shrink_exact_box(f.exact_q(), f.exact_degree());
}

TruncatedSeries series_partial(const TruncatedSeries& f, Variable v) {
  const SeriesContext& ctx = f.context();
  const int slot = slot_of(ctx, v);
  TruncatedSeries out(ctx);
  for (const auto& [e, c] : f.terms()) {
    if (e[slot] == 0) continue;
    Exponents d = e;
    d[slot] -= 1;
    out.add_term(d, c * e[slot]);
  }
  if (slot == 0) return out.shrink_exact_box(f.exact_q() - 1, f.exact_degree());
  return out.shrink_exact_box(f.exact_q(), f.exact_degree() - 1);
}

TruncatedSeries substitute(const TruncatedSeries& f,
                           std::span<const TruncatedSeries> t_images,
                           std::span<const TruncatedSeries> that_images) {
  const SeriesContext& ctx = f.context();
  if (static_cast<int>(t_images.size()) != ctx.K ||
      static_cast<int>(that_images.size()) != ctx.K)
    throw std::invalid_argument("substitute needs K images per family");
  std::vector<const TruncatedSeries*> images;
  for (const auto& img : t_images) images.push_back(&img);
  for (const auto& img : that_images) images.push_back(&img);

  // powers[slot][a] = image^a, built lazily.
  std::vector<std::vector<TruncatedSeries>> powers(images.size());
  auto power_of = [&](std::size_t slot, int a) -> const TruncatedSeries& {
    auto& row = powers[slot];
    if (row.empty()) row.push_back(TruncatedSeries::constant(ctx, 1));
    while (static_cast<int>(row.size()) <= a) row.push_back(row.back() * *images[slot]);
    return row[a];
  };

  TruncatedSeries out(ctx);
  for (const auto& [e, c] : f.terms()) {
    Exponents qe(ctx.num_slots(), 0);
    qe[0] = e[0];
    TruncatedSeries term = TruncatedSeries::monomial(ctx, qe, c);
    for (std::size_t slot = 0; slot < images.size(); ++slot)
      if (e[slot + 1] > 0) term = term * power_of(slot, e[slot + 1]);
    out += term;
  }
  // Linear images without constant terms keep f's box; in general the
  // product rules above already shrank it where needed.
  return out.shrink_exact_box(f.exact_q(), f.exact_degree());
}

std::string monomial_key(const Exponents& e, int K) {
  std::string key = "Q^" + std::to_string(e[0]);
  for (int k = 1; k <= K; ++k)
    if (e[k] != 0) key += " t" + std::to_string(k) + "^" + std::to_string(e[k]);
  for (int k = 1; k <= K; ++k)
    if (e[K + k] != 0)
      key += " th" + std::to_string(k) + "^" + std::to_string(e[K + k]);
  return key;
}

Exponents parse_monomial_key(std::string_view key, const SeriesContext& ctx) {
  Exponents e(ctx.num_slots(), 0);
  auto fail = [&]() -> Exponents {
    throw std::invalid_argument("malformed monomial key: '" + std::string(key) + "'");
  };
  auto to_int = [&](std::string_view v) {
    int x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || x < 0) fail();
    return x;
  };
  bool saw_q = false;
  std::size_t pos = 0;
  while (pos < key.size()) {
    std::size_t end = key.find(' ', pos);
    if (end == std::string_view::npos) end = key.size();
    const std::string_view tok = key.substr(pos, end - pos);
    pos = end + 1;
    const std::size_t caret = tok.find('^');
    if (caret == std::string_view::npos) fail();
    const std::string_view name = tok.substr(0, caret);
    const int exponent = to_int(tok.substr(caret + 1));
    int slot = -1;
    if (name == "Q") {
      slot = 0;
      saw_q = true;
    } else if (name.starts_with("th")) {
      const int k = to_int(name.substr(2));
      if (k < 1 || k > ctx.K) fail();
      slot = ctx.K + k;
    } else if (name.starts_with("t")) {
      const int k = to_int(name.substr(1));
      if (k < 1 || k > ctx.K) fail();
      slot = k;
    } else {
      fail();
    }
    e[slot] = exponent;
  }
  if (!saw_q) fail();
  return e;
}

nlohmann::ordered_json to_json(const TruncatedSeries& f) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [e, c] : f.terms())
    j[monomial_key(e, f.context().K)] = to_string(c);
  return j;
}

TruncatedSeries series_from_json(const nlohmann::ordered_json& j,
                                 const SeriesContext& ctx) {
  if (!j.is_object()) throw std::invalid_argument("series JSON must be an object");
  TruncatedSeries f(ctx);
  for (const auto& [key, value] : j.items())
    f.add_term(parse_monomial_key(key, ctx), parse_scalar(value.get<std::string>()));
  return f;
}

}  // namespace toda_crystal
