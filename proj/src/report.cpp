#include "toda_crystal/report.hpp"

#include <algorithm>

namespace toda_crystal {

namespace {

// Number of exponent vectors in `vars` variables of total degree <= d.
std::size_t monomials_up_to(int vars, int d) {
  // C(vars + d, d), exact in integers for the small sizes used here.
  std::size_t num = 1;
  for (int i = 1; i <= d; ++i) num = num * static_cast<std::size_t>(vars + i) / i;
  return num;
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kInsufficientWindow: return "insufficient_window";
  }
  return "fail";
}

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json ev = nlohmann::ordered_json::object();
  ev["window"] = window;
  if (worst) {
    nlohmann::ordered_json w;
    w["row"] = worst->row;
    if (!worst->col.empty()) w["col"] = worst->col;
    w["value"] = toda_crystal::to_string(worst->value);
    ev["entry"] = std::move(w);
  }
  for (const auto& [key, val] : evidence.items()) ev[key] = val;

  nlohmann::ordered_json j;
  j["check"] = check;
  j["params"] = params;
  j["status"] = toda_crystal::to_string(status);
  j["evidence"] = std::move(ev);
  j["wall_ms"] = wall_ms;
  return j;
}

nlohmann::ordered_json sector_params(const SectorConfig& config) {
  nlohmann::ordered_json j;
  j["s"] = config.charge;
  j["p"] = toda_crystal::to_string(config.p);
  j["N"] = config.cutoff;
  return j;
}

OperatorScan scan_operator(const SectorOperator& residual,
                           const std::function<bool(std::size_t, std::size_t)>& certified) {
  OperatorScan out;
  const auto& b = residual.basis();
  for (std::size_t r = 0; r < residual.dim(); ++r) {
    for (std::size_t c = 0; c < residual.dim(); ++c) {
      const bool ok = certified ? certified(r, c) : residual.certified(r, c);
      if (!ok) continue;
      ++out.window;
      if (out.first_nonzero) continue;
      const Scalar v = residual.entry(r, c);
      if (v != 0) out.first_nonzero = ResidualEntry{b.shape(r).to_json(), b.shape(c).to_json(), v};
    }
  }
  return out;
}

SeriesScan scan_series(const TruncatedSeries& diff) {
  const auto& ctx = diff.context();
  SeriesScan out;
  const int max_q = std::min(diff.exact_q(), ctx.NQ);
  const int max_d = std::min(diff.exact_degree(), ctx.D);
  if (max_q < 0 || max_d < 0) return out;
  out.window = static_cast<std::size_t>(max_q + 1) * monomials_up_to(2 * ctx.K, max_d);
  for (const auto& [e, c] : diff.terms()) {
    if (!diff.is_exact_at(e)) continue;
    out.first_nonzero = ResidualEntry{monomial_key(e, ctx.K), "", c};
    break;
  }
  return out;
}

void settle_identity(CheckReport& report, std::size_t window,
                     const std::optional<ResidualEntry>& first_nonzero) {
  report.window = window;
  report.worst = first_nonzero;
  if (window == 0)
    report.status = CheckStatus::kInsufficientWindow;
  else
    report.status = first_nonzero ? CheckStatus::kFail : CheckStatus::kPass;
}

void settle_negative(CheckReport& report, std::size_t window,
                     const std::optional<ResidualEntry>& first_nonzero) {
  report.window = window;
  report.worst = first_nonzero;
  if (window == 0)
    report.status = CheckStatus::kInsufficientWindow;
  else
    report.status = first_nonzero ? CheckStatus::kPass : CheckStatus::kFail;
}

}  // namespace toda_crystal
