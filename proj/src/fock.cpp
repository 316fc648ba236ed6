#include "toda_crystal/fock.hpp"

#include <algorithm>
#include <stdexcept>

namespace toda_crystal {

void SectorConfig::validate() const {
  if (cutoff < 0) throw std::invalid_argument("cutoff N must be nonnegative");
  require_valid_p(p);
}

bool FockState::occupied(long level) const noexcept {
  if (level <= floor_level()) return true;
  for (std::size_t i = 1; i <= shape.length(); ++i)
    if (charge + shape.part(i) - static_cast<long>(i) + 1 == level) return true;
  return false;
}

long FockState::occupied_between(long lo, long hi) const noexcept {
  const long floor = floor_level();
  long count = std::max(0L, std::min(hi - 1, floor) - lo);
  for (std::size_t i = 1; i <= shape.length(); ++i) {
    const long x = charge + shape.part(i) - static_cast<long>(i) + 1;
    if (x > lo && x < hi) ++count;
  }
  return count;
}

namespace {

long top_level(const FockState& st) {
  return st.shape.empty() ? st.floor_level() : st.charge + st.shape.part(1);
}

}  // namespace

BilinearResult apply_bilinear(long a, long b, const FockState& state,
                              bool normal_ordered, std::optional<int> cutoff) {
  const long target = -a;
  if (target == b) {
    int coef = state.occupied(b) ? 1 : 0;
    if (normal_ordered && b <= 0) coef -= 1;
    return {coef, state, false};
  }
  if (!state.occupied(b) || state.occupied(target)) return {0, state, false};

  const long crossings =
      state.occupied_between(std::min(b, target), std::max(b, target));
  const int sign = crossings % 2 == 0 ? 1 : -1;

  // Levels at or below `base` stay occupied after the move.
  const long base = std::min<long>(state.floor_level(), b) - 1;
  const long top = std::max(top_level(state), target);
  std::vector<long> levels;
  for (long x = top; x > base; --x)
    if (x == target || (x != b && state.occupied(x))) levels.push_back(x);

  std::vector<int> parts;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const long part = levels[i] - state.charge + static_cast<long>(i);
    if (part > 0) parts.push_back(static_cast<int>(part));
  }
  FockState out{state.charge, Partition(std::move(parts))};
  const bool overflow = cutoff && out.shape.weight() > *cutoff;
  return {sign, std::move(out), overflow};
}

SectorBasis::SectorBasis(int charge, int cutoff)
    : charge_(charge),
      cutoff_(cutoff),
      shapes_(enumerate_partitions(cutoff, EnumerationMode::kAllUpTo)) {
  level_start_.assign(cutoff + 2, shapes_.size());
  for (std::size_t i = shapes_.size(); i-- > 0;) {
    index_.emplace(shapes_[i], i);
    level_start_[shapes_[i].weight()] = i;
  }
  for (int n = cutoff; n >= 0; --n)
    level_start_[n] = std::min(level_start_[n], level_start_[n + 1]);
}

std::optional<std::size_t> SectorBasis::index_of(const Partition& mu) const {
  auto it = index_.find(mu);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<std::size_t, std::size_t> SectorBasis::energy_range(int n) const {
  if (n < 0 || n > cutoff_) return {shapes_.size(), shapes_.size()};
  return {level_start_[n], level_start_[n + 1]};
}

std::vector<FockState> basis(const SectorConfig& config) {
  config.validate();
  std::vector<FockState> out;
  for (auto& mu : enumerate_partitions(config.cutoff, EnumerationMode::kAllUpTo))
    out.push_back({config.charge, std::move(mu)});
  return out;
}

std::shared_ptr<const SectorBasis> make_basis(const SectorConfig& config) {
  config.validate();
  return std::make_shared<const SectorBasis>(config.charge, config.cutoff);
}

namespace {

// Range of n outside which :psi_{-n} psi*_n: vanishes on this state.
std::pair<long, long> diagonal_window(const FockState& st) {
  return {std::min<long>(st.floor_level(), 0) - 1, std::max<long>(top_level(st), 0) + 1};
}

template <typename Weight>
Scalar diagonal_sum(const FockState& st, Weight weight) {
  Scalar total = 0;
  const auto [lo, hi] = diagonal_window(st);
  for (long n = lo; n <= hi; ++n) {
    const int c = apply_bilinear(-n, n, st, true).coefficient;
    if (c != 0) total += c * weight(n);
  }
  return total;
}

template <typename Weight>
long integer_diagonal_sum(const FockState& st, Weight weight) {
  long total = 0;
  const auto [lo, hi] = diagonal_window(st);
  for (long n = lo; n <= hi; ++n)
    total += apply_bilinear(-n, n, st, true).coefficient * weight(n);
  return total;
}

}  // namespace

long l0_eigenvalue(const FockState& state) {
  return integer_diagonal_sum(state, [](long n) { return n; });
}

long w0_eigenvalue(const FockState& state) {
  return integer_diagonal_sum(state, [](long n) { return n * n; });
}

SectorOperator v_op(int k, int m, const SectorConfig& config) {
  config.validate();
  if (std::abs(m) > config.cutoff)
    throw std::invalid_argument("v_op: |m| exceeds the cutoff, window is empty");
  auto b = make_basis(config);
  SectorOperator op(b, config, ShiftRange::banded(-m));
  for (std::size_t j = 0; j < b->size(); ++j) {
    const FockState st = b->state(j);
    if (m == 0) {
      op.add(j, j, diagonal_sum(st, [&](long n) { return qpow(config.p, 2L * k * n); }));
      continue;
    }
    const long lo = st.floor_level() - std::abs(m) - 1;
    const long hi = top_level(st) + 1;
    for (long n = lo; n <= hi; ++n) {
      const BilinearResult r = apply_bilinear(m - n, n, st, true, config.cutoff);
      if (r.coefficient == 0 || r.overflow) continue;
      const std::size_t i = *b->index_of(r.state.shape);
      op.add(i, j, r.coefficient * qpow(config.p, 2L * k * n - static_cast<long>(k) * m));
    }
  }
  op.finalize();
  return op;
}

SectorOperator diag_op(DiagKind kind, const SectorConfig& config, int c) {
  config.validate();
  auto b = make_basis(config);
  SectorOperator op(b, config, ShiftRange::banded(0));
  for (std::size_t j = 0; j < b->size(); ++j) {
    const FockState st = b->state(j);
    switch (kind) {
      case DiagKind::kL0:
        op.add(j, j, Scalar(l0_eigenvalue(st)));
        break;
      case DiagKind::kW0:
        op.add(j, j, Scalar(w0_eigenvalue(st)));
        break;
      case DiagKind::kPW0Power:
        op.add(j, j, qpow(config.p, static_cast<long>(c) * w0_eigenvalue(st)));
        break;
    }
  }
  op.finalize();
  return op;
}

SeriesDiagonal q_l0_diagonal(const SectorConfig& config, const SeriesContext& ctx) {
  config.validate();
  ctx.validate();
  auto b = make_basis(config);
  SeriesDiagonal out;
  for (std::size_t j = 0; j < b->size(); ++j) {
    const long e = l0_eigenvalue(b->state(j));
    Exponents ex(ctx.num_slots(), 0);
    ex[0] = static_cast<int>(e);
    out.dropped.push_back(e > ctx.NQ);
    out.entries.push_back(TruncatedSeries::monomial(ctx, ex, 1));
  }
  return out;
}

SectorOperator vertex_op(std::span<const Scalar> coeffs, VertexDirection direction,
                         const SectorConfig& config) {
  config.validate();
  const int n = config.cutoff;
  if (static_cast<int>(coeffs.size()) < n)
    throw std::invalid_argument("vertex_op needs coefficients for k = 1..N");
  auto b = make_basis(config);
  const int sign = direction == VertexDirection::kRaising ? -1 : 1;

  const ShiftRange range = direction == VertexDirection::kRaising
                               ? ShiftRange::raising()
                               : ShiftRange::lowering();
  SectorOperator x(b, config, range);
  for (int k = 1; k <= n; ++k) {
    if (coeffs[k - 1] == 0) continue;
    x = x + coeffs[k - 1] * current_op(sign * k, config);
    x.declare_primitive(range);
  }
  // X moves energy by at least one per application, so X^{N+1} = 0 here.
  SectorOperator sum = SectorOperator::identity(b, config);
  SectorOperator term = sum;
  for (int j = 1; j <= n; ++j) {
    term = term * x;
    term *= Scalar(1, j);
    term.declare_primitive(range);
    if (term.nonzeros() == 0) break;
    sum = sum + term;
    sum.declare_primitive(range);
  }
  return sum;
}

std::vector<Scalar> transfer_coefficients(TransferKind kind, const Scalar& p, int n) {
  require_valid_p(p);
  std::vector<Scalar> out;
  for (int k = 1; k <= n; ++k) {
    Scalar c = qpow(p, k) / (Scalar(k) * (1 - qpow(p, 2L * k)));
    if (kind == TransferKind::kGPrime && k % 2 == 0) c = -c;
    out.push_back(c);
  }
  return out;
}

TransferOperators transfer_operators(const SectorConfig& config) {
  const auto g = transfer_coefficients(TransferKind::kG, config.p, config.cutoff);
  const auto gp = transfer_coefficients(TransferKind::kGPrime, config.p, config.cutoff);
  return {vertex_op(g, VertexDirection::kLowering, config),
          vertex_op(g, VertexDirection::kRaising, config),
          vertex_op(gp, VertexDirection::kLowering, config),
          vertex_op(gp, VertexDirection::kRaising, config)};
}

int central_sign(const SectorConfig& config) {
  SectorConfig c = config;
  c.cutoff = std::max(1, config.cutoff);
  const SectorOperator comm = commutator(current_op(1, c), current_op(-1, c));
  const Scalar v = comm.entry(0, 0);
  if (v != 1 && v != -1)
    throw std::logic_error("[J_1, J_-1] on the vacuum is not +-1");
  return v > 0 ? 1 : -1;
}

}  // namespace toda_crystal
