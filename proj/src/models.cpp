#include "toda_crystal/models.hpp"

#include <algorithm>
#include <stdexcept>

#include "toda_crystal/fock.hpp"

namespace toda_crystal {

namespace {

// Sum over |mu| <= NQ of weight(mu) Q^{|mu| + c_s} exp(linear(mu)), where the
// linear form in t, th is given by its coefficients.
template <typename Weight, typename Linear>
TruncatedSeries partition_sum(const ModelParams& params, Weight weight, Linear linear) {
  const SeriesContext ctx = params.series_context();
  TruncatedSeries total(ctx);
  for (const auto& mu : enumerate_partitions(params.relative.NQ, EnumerationMode::kAllUpTo)) {
    const Scalar w = weight(mu);
    if (w == 0) continue;
    TruncatedSeries h(ctx);
    for (int k = 1; k <= ctx.K; ++k) {
      const auto [a, b] = linear(k, mu);
      if (a != 0) h += TruncatedSeries::variable(ctx, Variable::t(k), a);
      if (b != 0) h += TruncatedSeries::variable(ctx, Variable::t_hat(k), b);
    }
    total += series_exp(h).times_q_power(mu.weight() + params.ground()) * w;
  }
  return total;
}

long w0_closed(const Partition& mu, int s) {
  return mu.kappa() + (2L * s + 1) * mu.weight() + sector_w0_offset(s);
}

}  // namespace

int ModelParams::required_cutoff(const SeriesContext& ctx) noexcept {
  return std::max(ctx.NQ, ctx.K * ctx.D);
}

ModelParams ModelParams::make(int s, int l, const Scalar& p, const SeriesContext& ctx,
                              std::optional<int> cutoff) {
  ctx.validate();
  require_valid_p(p);
  const int need = required_cutoff(ctx);
  if (cutoff && *cutoff < need)
    throw std::invalid_argument("cutoff N=" + std::to_string(*cutoff) +
                                " is below max(NQ, K*D)=" + std::to_string(need));
  ModelParams m;
  m.s = s;
  m.l = l;
  m.p = p;
  m.relative = ctx;
  m.cutoff = cutoff.value_or(need);
  return m;
}

nlohmann::ordered_json ModelParams::to_json() const {
  nlohmann::ordered_json j;
  j["s"] = s;
  j["l"] = l;
  j["p"] = toda_crystal::to_string(p);
  j["K"] = relative.K;
  j["D"] = relative.D;
  j["NQ"] = relative.NQ;
  j["N"] = cutoff;
  return j;
}

Scalar schur_qrho(const Partition& mu, const Scalar& p) {
  Scalar denom = 1;
  for (int h : mu.hook_multiset()) denom *= qpow(p, -h) - qpow(p, h);
  return qpow(p, -mu.kappa() / 2) / denom;
}

Scalar phi_potential(int k, const Partition& mu, int s, const Scalar& p) {
  if (k == 0) throw std::invalid_argument("phi_potential needs k != 0");
  const long kk = k;
  Scalar total = 0;
  for (std::size_t i = 1; i <= mu.length(); ++i) {
    const long ii = static_cast<long>(i);
    total += qpow(p, 2 * kk * (s + mu.part(i) - ii + 1)) - qpow(p, 2 * kk * (s - ii + 1));
  }
  const Scalar qk = qpow(p, 2 * kk);
  return total + qk * (1 - qpow(p, 2 * kk * s)) / (1 - qk);
}

TruncatedSeries zprime_series(const ModelParams& params) {
  return partition_sum(
      params,
      [&](const Partition& mu) -> Scalar {
        return schur_qrho(mu, params.p) * schur_qrho(mu.conjugate(), params.p) *
               qpow(params.p, params.l * w0_closed(mu, params.s));
      },
      [&](int k, const Partition& mu) {
        return std::pair{phi_potential(k, mu, params.s, params.p),
                         phi_potential(-k, mu, params.s, params.p)};
      });
}

TruncatedSeries z_series(const ModelParams& params) {
  return partition_sum(
      params,
      [&](const Partition& mu) -> Scalar {
        const Scalar sm = schur_qrho(mu, params.p);
        return sm * sm * qpow(params.p, params.l * w0_closed(mu, params.s));
      },
      [&](int k, const Partition& mu) {
        return std::pair{phi_potential(k, mu, params.s, params.p), Scalar(0)};
      });
}

TruncatedSeries zprime_special(int l, const Scalar& p, int NQ) {
  require_valid_p(p);
  const SeriesContext ctx{1, 0, NQ};
  ctx.validate();
  TruncatedSeries total(ctx);
  Exponents e(ctx.num_slots(), 0);
  for (const auto& mu : enumerate_partitions(NQ, EnumerationMode::kAllUpTo)) {
    e[0] = mu.weight();
    total.add_term(e, schur_qrho(mu, p) * schur_qrho(mu.conjugate(), p) *
                          qpow(p, static_cast<long>(l) * (mu.kappa() + mu.weight())));
  }
  return total;
}

TruncatedSeries fermionic_expectation(const ModelParams& params, ModelKind which) {
  if (params.cutoff < params.relative.NQ)
    throw std::invalid_argument("fermionic_expectation needs N >= NQ");
  const SectorConfig config = params.sector();
  const SeriesContext ctx = params.series_context();
  const auto t = transfer_operators(config);
  const SectorOperator& right = which == ModelKind::kZ ? t.g_minus : t.gp_minus;
  const auto l0 = diag_op(DiagKind::kL0, config);
  const auto w0 = diag_op(DiagKind::kW0, config);
  std::vector<SectorOperator> h_plus, h_minus;
  for (int k = 1; k <= ctx.K; ++k) {
    h_plus.push_back(v_op(k, 0, config));
    h_minus.push_back(v_op(-k, 0, config));
  }

  TruncatedSeries total(ctx);
  const auto& b = l0.basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Scalar l0_val = l0.entry(i, i);
    if (l0_val > ctx.NQ) continue;
    if (!t.g_plus.certified(0, i) || !right.certified(i, 0))
      throw std::logic_error("fermionic_expectation hit an uncertified entry");
    const Scalar amp = t.g_plus.entry(0, i) * right.entry(i, 0);
    if (amp == 0) continue;
    TruncatedSeries h(ctx);
    for (int k = 1; k <= ctx.K; ++k) {
      h += TruncatedSeries::variable(ctx, Variable::t(k), h_plus[k - 1].entry(i, i));
      if (which == ModelKind::kZprime)
        h += TruncatedSeries::variable(ctx, Variable::t_hat(k), h_minus[k - 1].entry(i, i));
    }
    const long w = w0.entry(i, i).get_num().get_si();
    const int q_exp = static_cast<int>(l0_val.get_num().get_si());
    total += series_exp(h).times_q_power(q_exp) * (amp * qpow(params.p, params.l * w));
  }
  return total;
}

}  // namespace toda_crystal
