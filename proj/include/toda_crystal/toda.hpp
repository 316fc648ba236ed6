#pragma once

#include <map>
#include <span>
#include <vector>

#include "toda_crystal/models.hpp"
#include "toda_crystal/report.hpp"
#include "toda_crystal/sector_operator.hpp"
#include "toda_crystal/series.hpp"

namespace toda_crystal {

/// g = sum_n Q^{n + c_s} A Pi_n B, with Pi_n the projector onto energy n and
/// c_s = s(s+1)/2. An entry of A Pi_n B is certified when A is certified at
/// (row, n) and B at (n, col); the middle energy is pinned by the projector.
class GradedOperator {
public:
  /// Orders n = 0..max_order are kept. Throws std::invalid_argument when
  /// the factors live in different sectors or max_order exceeds the cutoff.
  GradedOperator(SectorOperator left, SectorOperator right, int max_order);

  const SectorOperator& left() const noexcept { return left_; }
  const SectorOperator& right() const noexcept { return right_; }
  const SectorBasis& basis() const noexcept { return left_.basis(); }
  int charge() const noexcept { return left_.config().charge; }
  int sector_constant() const noexcept { return sector_energy_offset(charge()); }
  int max_order() const noexcept { return max_order_; }

  Scalar graded_entry(int n, std::size_t row, std::size_t col) const;
  bool certified(int n, std::size_t row, std::size_t col) const;

  /// <row| g |col> as a series in Q. Throws std::logic_error if a retained
  /// order is not certified.
  TruncatedSeries entry_series(std::size_t row, std::size_t col,
                               const SeriesContext& ctx) const;

private:
  SectorOperator left_;
  SectorOperator right_;
  int max_order_;
};

/// A Pi_n B as a plain operator (its certificate is not meaningful; use the
/// factor certificates at energy n instead).
SectorOperator projected_product(const SectorOperator& a, int n, const SectorOperator& b);

struct BuildOptions {
  /// Test hook: every transfer operator replaced by the identity.
  bool zero_transfer = false;
};

/// g' = q^{W_0/2} G_-G_+ q^{lW_0/2} Q^{L_0} G'_-G'_+ q^{-W_0/2}.
GradedOperator build_gprime(const ModelParams& params, BuildOptions options = {});
/// g = q^{W_0/2} G_-G_+ q^{lW_0/2} Q^{L_0} G_-G_+ q^{W_0/2}.
GradedOperator build_g(const ModelParams& params, BuildOptions options = {});

struct TauSeries {
  int charge = 0;
  TruncatedSeries series;
};

/// <s| exp(sum_k x_k J_k) g exp(sum_k y_k J_{-k}) |s> for linear forms x_k,
/// y_k (k = 1..K) in the series context of `params`. Throws
/// std::invalid_argument when N < max(NQ, K*D).
TauSeries graded_expectation(const GradedOperator& g, std::span<const TruncatedSeries> x,
                             std::span<const TruncatedSeries> y, const ModelParams& params);

/// tau'(s, t, th) = <s| exp(sum t_k J_k) g' exp(-sum th_k J_{-k}) |s>.
TauSeries tau_prime_series(const ModelParams& params);

enum class TauForm { kLeft, kSymmetric, kRight, kReduced2D };

/// Previous-model tau: J's on the left, split half and half, J's on the
/// right, or the two-time form <s| e^{sum t J} g e^{-sum th J_-} |s>.
TauSeries tau_prev_series(const ModelParams& params, TauForm form);

/// Z' against exp(sum (q^k t_k + th_k)/(1-q^k)) tau'(s, (-1)^k t_k, -th_k).
CheckReport verify_main_identity(const ModelParams& params);

/// Z against exp(sum t_k q^k/(1-q^k)) q^{-s(s+1)(2s+1)/6} tau(s, (-1)^k t_k).
CheckReport verify_prev_identity(const ModelParams& params);

/// The three one-time forms of tau agree coefficientwise.
CheckReport tau_forms_check(const ModelParams& params);

/// The two-time form equals the left form with t_k replaced by t_k - th_k.
CheckReport reduction_check(const ModelParams& params);

/// <s|G_- = <s| and G'_+|s> = |s>, and the vacuum scalars of q^{-W_0/2} and
/// q^{W_0/2} equal q^{-+s(s+1)(2s+1)/12}.
CheckReport ground_action_constants(int s, const Scalar& p, const SectorConfig& config);

enum class Intertwiner { kGTrue, kGPrimeFake };

/// kGTrue: J_k g - g J_{-k}, must vanish. kGPrimeFake: J_k g' - g' J_k,
/// passes when some certified entry is nonzero. The relation for g holds for
/// k > 0 only; negative k checks the mirrored relation, which fails. Throws
/// std::invalid_argument unless 0 < |k| <= K.
CheckReport intertwining_residual(Intertwiner which, int k, const ModelParams& params);

/// Passes when tau' differs from exp(-sigma sum k t_k th_k) <s|g'|s>, sigma
/// the measured sign of [J_1, J_-1].
CheckReport trivial_tau_compare(const ModelParams& params);

enum class BilinearSign { kAuto, kPlus, kMinus };

/// tau_s d1 dh1 tau_s - d1 tau_s dh1 tau_s = c Q^e tau_{s+1} tau_{s-1} for
/// every s whose neighbours are present, compared on the exact box. With
/// kAuto, (c, e) is fixed on the closed-form family for g = 1; a failed
/// calibration throws std::runtime_error. Throws std::invalid_argument when
/// no charge has both neighbours.
CheckReport toda_bilinear_residual(const std::map<int, TauSeries>& family,
                                   BilinearSign sign = BilinearSign::kAuto);

/// Closed form <s| e^{sum t J} e^{-sum th J_-} |s> = exp(-sigma sum k t_k th_k).
TruncatedSeries trivial_tau(const SeriesContext& ctx, int sigma);

}  // namespace toda_crystal
