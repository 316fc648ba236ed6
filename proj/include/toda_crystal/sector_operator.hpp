#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toda_crystal/scalar.hpp"
#include "toda_crystal/sector.hpp"

namespace toda_crystal {

enum class ShiftClass { kLowering, kRaising, kBanded, kMixed };

/// Interval of energy shifts |row| - |col| a factor can produce. An empty
/// optional bound means unbounded in that direction.
struct ShiftRange {
  std::optional<int> lo;
  std::optional<int> hi;

  static ShiftRange lowering() { return {std::nullopt, 0}; }
  static ShiftRange raising() { return {0, std::nullopt}; }
  static ShiftRange banded(int delta) { return {delta, delta}; }
};

/// Certifies that a product entry is unaffected by the energy cutoff.
///
/// Each chain lists the shift ranges of the primitive factors of one product
/// term, left to right. An entry (row, col) is certified iff for every chain
/// and every split point, the intermediate energy is bounded by N either from
/// the row side (|row| plus max(0, -lo) of the factors to the left; unbounded
/// through a lowering factor) or from the column side (|col| plus max(0, hi)
/// of the factors to the right; unbounded through a raising factor).
class ExactnessCertificate {
public:
  using Chain = std::vector<ShiftRange>;

  ExactnessCertificate(int cutoff, std::vector<Chain> chains);
  static ExactnessCertificate primitive(int cutoff, ShiftRange range);

  int cutoff() const noexcept { return cutoff_; }
  const std::vector<Chain>& chains() const noexcept { return chains_; }
  bool certifies(int row_energy, int col_energy) const;

  /// Certificate of (this) * right.
  ExactnessCertificate then(const ExactnessCertificate& right) const;
  /// Certificate of (this) + other.
  ExactnessCertificate combine(const ExactnessCertificate& other) const;

  /// Hull of the total shift over all chains.
  ShiftRange total_range() const;

private:
  int cutoff_;
  std::vector<Chain> chains_;
};

/// Sparse charge-preserving operator on a truncated sector, stored by rows.
///
/// Entries are exact rationals. Which of them are unaffected by truncation is
/// decided by the attached certificate, never by the stored values.
class SectorOperator {
public:
  using Row = std::vector<std::pair<std::size_t, Scalar>>;

  SectorOperator(std::shared_ptr<const SectorBasis> basis, SectorConfig config,
                 ShiftRange range);

  static SectorOperator identity(std::shared_ptr<const SectorBasis> basis,
                                 const SectorConfig& config,
                                 const Scalar& scale = 1);

  const SectorBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const SectorBasis>& basis_ptr() const noexcept {
    return basis_;
  }
  const SectorConfig& config() const noexcept { return config_; }
  std::size_t dim() const noexcept { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const ExactnessCertificate& certificate() const noexcept { return cert_; }

  ShiftClass shift_class() const;
  /// Energy shift for BANDED operators.
  std::optional<int> band() const;

  Scalar entry(std::size_t r, std::size_t c) const;
  bool certified(std::size_t r, std::size_t c) const;
  std::size_t nonzeros() const;

  /// Accumulates into entry (r, c); rows must be finalized before use.
  void add(std::size_t r, std::size_t c, const Scalar& v);
  /// Sorts rows and prunes zeros.
  void finalize();

  /// Declares this operator primitive: every entry inside the window is exact
  /// and the energy shift lies in `range`. For operator builders only.
  SectorOperator& declare_primitive(ShiftRange range) {
    cert_ = ExactnessCertificate::primitive(config_.cutoff, range);
    return *this;
  }

  SectorOperator& operator*=(const Scalar& c);
  friend SectorOperator operator+(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator-(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator*(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator*(const Scalar& c, SectorOperator a) {
    return a *= c;
  }

  /// [{"row":[..],"col":[..],"val":"num/den","certified":true}, ...]
  nlohmann::json dump() const;

private:
  void require_compatible(const SectorOperator& o) const;
  SectorOperator combine_with(const SectorOperator& o, int sign) const;

  std::shared_ptr<const SectorBasis> basis_;
  SectorConfig config_;
  std::vector<Row> rows_;
  ExactnessCertificate cert_;
};

struct ProductResult {
  SectorOperator op;
  ExactnessCertificate certificate;
};

/// Left-to-right matrix product with its certificate. Throws
/// std::invalid_argument on an empty list or mismatched sector configs.
ProductResult op_product(std::span<const SectorOperator> factors);

/// [A, B] = AB - BA.
SectorOperator commutator(const SectorOperator& a, const SectorOperator& b);

}  // namespace toda_crystal
