#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "toda_crystal/partition.hpp"
#include "toda_crystal/scalar.hpp"

namespace toda_crystal {

/// A truncated charge sector: charge s, energy cutoff N (max |mu|), the
/// deformation parameter p = q^{1/2}, and the integer l of the W_0 weight.
struct SectorConfig {
  int charge = 0;
  int cutoff = 0;
  Scalar p = Scalar(1, 2);
  int l = 0;

  void validate() const;
  friend bool operator==(const SectorConfig&, const SectorConfig&) = default;
};

/// |mu, s>. Its Maya diagram occupies the levels s + mu_i - i + 1, i >= 1.
struct FockState {
  int charge = 0;
  Partition shape;

  /// Levels at or below this one are all occupied.
  int floor_level() const noexcept {
    return charge - static_cast<int>(shape.length());
  }
  bool occupied(long level) const noexcept;
  /// Number of occupied levels strictly between lo and hi (lo < hi).
  long occupied_between(long lo, long hi) const noexcept;

  friend bool operator==(const FockState&, const FockState&) = default;
};

/// Outcome of a single fermion bilinear psi_a psi*_b on a basis state:
/// coefficient * |state>, where coefficient is 0 or +-1.
struct BilinearResult {
  int coefficient = 0;
  FockState state;
  /// Set when the result is nonzero but lies above the supplied cutoff.
  bool overflow = false;
};

/// Action of psi_a psi*_b: removes level b, then fills level -a. The sign is
/// the parity of occupied levels strictly between the two. With
/// normal_ordered set, the charge-0 vacuum value [b <= 0] is subtracted when
/// a + b = 0.
BilinearResult apply_bilinear(long a, long b, const FockState& state,
                              bool normal_ordered,
                              std::optional<int> cutoff = std::nullopt);

/// Partition-indexed basis of a truncated charge sector, canonical order.
class SectorBasis {
public:
  SectorBasis(int charge, int cutoff);

  int charge() const noexcept { return charge_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return shapes_.size(); }
  const Partition& shape(std::size_t i) const { return shapes_[i]; }
  FockState state(std::size_t i) const { return {charge_, shapes_[i]}; }
  int energy(std::size_t i) const noexcept { return shapes_[i].weight(); }
  std::optional<std::size_t> index_of(const Partition& mu) const;
  /// Index range [first, last) of the states with |mu| == n.
  std::pair<std::size_t, std::size_t> energy_range(int n) const;

private:
  int charge_;
  int cutoff_;
  std::vector<Partition> shapes_;
  std::map<Partition, std::size_t> index_;
  std::vector<std::size_t> level_start_;
};

std::vector<FockState> basis(const SectorConfig& config);

/// s(s+1)/2, the L_0 eigenvalue of |s>.
inline int sector_energy_offset(int s) noexcept { return s * (s + 1) / 2; }
/// s(s+1)(2s+1)/6, the W_0 eigenvalue of |s>.
inline long sector_w0_offset(long s) noexcept {
  return s * (s + 1) * (2 * s + 1) / 6;
}

}  // namespace toda_crystal
