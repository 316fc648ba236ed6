#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace toda_crystal {

/// An integer partition, stored as its weakly decreasing positive parts.
///
/// Partitions are immutable values. They compare in the canonical order used
/// to index Fock-space bases: first by weight, then lexicographically
/// descending on the parts, so (2) precedes (1,1).
class Partition {
public:
  Partition() = default;
  /// Throws std::invalid_argument if parts are not weakly decreasing and
  /// positive. Trailing zeros are dropped.
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts);

  const std::vector<int>& parts() const noexcept { return parts_; }
  std::size_t length() const noexcept { return parts_.size(); }
  bool empty() const noexcept { return parts_.empty(); }
  int weight() const noexcept { return weight_; }
  /// Sum of mu_i (mu_i - 2i + 1); always even.
  int kappa() const noexcept;
  /// i-th part (1-based); zero beyond the length.
  int part(std::size_t i) const noexcept {
    return i >= 1 && i <= parts_.size() ? parts_[i - 1] : 0;
  }

  Partition conjugate() const;

  /// Hook lengths arm + leg + 1 of all cells, sorted descending.
  std::vector<int> hook_multiset() const;

  /// JSON array text, e.g. "[3,1]" and "[]" for the empty partition.
  std::string to_json() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a,
                                          const Partition& b);

private:
  std::vector<int> parts_;
  int weight_ = 0;
};

enum class EnumerationMode { kAllUpTo, kExactWeight };

/// Partitions with weight <= n_max (or == n_max), in canonical order.
std::vector<Partition> enumerate_partitions(int n_max, EnumerationMode mode);

}  // namespace toda_crystal
