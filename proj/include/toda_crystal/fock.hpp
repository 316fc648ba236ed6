#pragma once

#include <memory>
#include <span>
#include <vector>

#include "toda_crystal/scalar.hpp"
#include "toda_crystal/sector.hpp"
#include "toda_crystal/sector_operator.hpp"
#include "toda_crystal/series.hpp"

namespace toda_crystal {

/// Shared basis for a config; identical configs yield interchangeable bases.
std::shared_ptr<const SectorBasis> make_basis(const SectorConfig& config);

/// V^(k)_m = q^{-km/2} sum_n q^{kn} :psi_{m-n} psi*_n:, which moves a
/// particle from level n to n - m. V^(k)_0 = H_k and V^(0)_m = J_m.
/// BANDED(-m). Throws std::invalid_argument if |m| > N.
SectorOperator v_op(int k, int m, const SectorConfig& config);

/// Current mode J_k = V^(0)_k.
inline SectorOperator current_op(int k, const SectorConfig& config) {
  return v_op(0, k, config);
}

enum class DiagKind { kL0, kW0, kPW0Power };

/// Diagonal operators built from the bilinear sums sum_n n^j :psi_{-n} psi*_n:.
/// kPW0Power gives q^{c W_0 / 2} = p^{c W_0}.
SectorOperator diag_op(DiagKind kind, const SectorConfig& config, int c = 1);

/// L_0 and W_0 eigenvalues of a state from their bilinear sums.
long l0_eigenvalue(const FockState& state);
long w0_eigenvalue(const FockState& state);

/// Q^{L_0} as series entries Q^{|mu| + s(s+1)/2}. Entries whose exponent
/// exceeds ctx.NQ are dropped and flagged.
struct SeriesDiagonal {
  std::vector<TruncatedSeries> entries;
  std::vector<bool> dropped;
};
SeriesDiagonal q_l0_diagonal(const SectorConfig& config, const SeriesContext& ctx);

enum class VertexDirection { kRaising, kLowering };

/// exp(sum_k c_k J_{-k}) (raising) or exp(sum_k c_k J_k) (lowering) by the
/// terminating series. coeffs[k-1] is c_k; at least N coefficients required.
SectorOperator vertex_op(std::span<const Scalar> coeffs, VertexDirection direction,
                         const SectorConfig& config);

enum class TransferKind { kG, kGPrime };

/// q^{k/2} / (k (1 - q^k)) for G, and -(-1)^k times that for G', k = 1..n.
std::vector<Scalar> transfer_coefficients(TransferKind kind, const Scalar& p, int n);

/// G_+, G_-, G'_+, G'_- for one sector.
struct TransferOperators {
  SectorOperator g_plus;
  SectorOperator g_minus;
  SectorOperator gp_plus;
  SectorOperator gp_minus;
};
TransferOperators transfer_operators(const SectorConfig& config);

/// Scalar c with [J_1, J_{-1}] = c on the vacuum of the sector, computed by
/// brute force. Fixes the sign of the Heisenberg central term.
int central_sign(const SectorConfig& config);

}  // namespace toda_crystal
