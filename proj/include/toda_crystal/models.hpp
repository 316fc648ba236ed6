#pragma once

#include <optional>

#include <json.hpp>

#include "toda_crystal/partition.hpp"
#include "toda_crystal/scalar.hpp"
#include "toda_crystal/sector.hpp"
#include "toda_crystal/series.hpp"

namespace toda_crystal {

/// Model parameters. `relative` caps the Q order above the ground value
/// s(s+1)/2; the series themselves use the absolute cap NQ + s(s+1)/2.
struct ModelParams {
  int s = 0;
  int l = 0;
  Scalar p = Scalar(1, 2);
  SeriesContext relative{1, 0, 0};
  int cutoff = 0;

  /// N defaults to max(NQ, K*D). Throws std::invalid_argument for an
  /// override below that, for invalid p, or for an invalid context.
  static ModelParams make(int s, int l, const Scalar& p, const SeriesContext& ctx,
                          std::optional<int> cutoff = std::nullopt);

  static int required_cutoff(const SeriesContext& ctx) noexcept;

  int ground() const noexcept { return sector_energy_offset(s); }
  SeriesContext series_context() const noexcept {
    return {relative.K, relative.D, relative.NQ + ground()};
  }
  SectorConfig sector() const { return {s, cutoff, p, l}; }
  nlohmann::ordered_json to_json() const;
};

/// s_mu(q^{-rho}) = q^{-kappa/4} / prod_h (q^{-h/2} - q^{h/2}) by hook lengths.
Scalar schur_qrho(const Partition& mu, const Scalar& p);

/// Phi_k(mu, s), the H_k eigenvalue. Throws std::invalid_argument for k = 0.
Scalar phi_potential(int k, const Partition& mu, int s, const Scalar& p);

/// Z'(s, t, th) as a sum over partitions.
TruncatedSeries zprime_series(const ModelParams& params);

/// Z(s, t) as a sum over partitions (no th dependence).
TruncatedSeries z_series(const ModelParams& params);

/// sum_mu s_mu s_{mu^t} q^{l kappa / 2} (q^{l/2} Q)^{|mu|}, a series in Q.
TruncatedSeries zprime_special(int l, const Scalar& p, int NQ);

enum class ModelKind { kZ, kZprime };

/// <s| G_+ q^{l W_0/2} Q^{L_0} e^H G'_- |s> (G_- for Z) from the Fock
/// operators, with H read off the bilinear-built diagonals.
TruncatedSeries fermionic_expectation(const ModelParams& params, ModelKind which);

}  // namespace toda_crystal
