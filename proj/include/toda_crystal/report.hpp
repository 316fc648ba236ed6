#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "toda_crystal/scalar.hpp"
#include "toda_crystal/sector_operator.hpp"
#include "toda_crystal/series.hpp"

namespace toda_crystal {

enum class CheckStatus { kPass, kFail, kInsufficientWindow };

std::string to_string(CheckStatus status);

/// First offending (or, for negative results, first witnessing) entry.
struct ResidualEntry {
  std::string row;
  std::string col;
  Scalar value;
};

/// Outcome of one verification. `window` counts the certified entries or
/// exact coefficients that were compared.
struct CheckReport {
  std::string check;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  CheckStatus status = CheckStatus::kInsufficientWindow;
  std::optional<ResidualEntry> worst;
  std::size_t window = 0;
  nlohmann::ordered_json evidence = nlohmann::ordered_json::object();
  long wall_ms = 0;

  bool passed() const noexcept { return status == CheckStatus::kPass; }

  /// {check, params, status, evidence, wall_ms}; the window and the worst
  /// entry are folded into evidence.
  nlohmann::ordered_json to_json() const;
};

using Clock = std::chrono::steady_clock;

inline long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
      .count();
}

/// Parameter block shared by the operator-level checks.
nlohmann::ordered_json sector_params(const SectorConfig& config);

/// Certified-entry scan of a residual operator in canonical (row, col) order.
struct OperatorScan {
  std::size_t window = 0;
  std::optional<ResidualEntry> first_nonzero;
};

/// Scans the entries of `residual` accepted by `certified`. The default
/// predicate is the residual's own certificate.
OperatorScan scan_operator(
    const SectorOperator& residual,
    const std::function<bool(std::size_t, std::size_t)>& certified = {});

/// Scan of a series difference over its exact box, in monomial order.
struct SeriesScan {
  std::size_t window = 0;
  std::optional<ResidualEntry> first_nonzero;
};

/// Compares every monomial inside the exact box of `diff`. The reported
/// entry uses the monomial key as `row` and leaves `col` empty.
SeriesScan scan_series(const TruncatedSeries& diff);

/// Fills status, worst and window for an identity that must hold exactly.
void settle_identity(CheckReport& report, std::size_t window,
                     const std::optional<ResidualEntry>& first_nonzero);

/// Same for a negative result: passes iff some compared entry is nonzero.
void settle_negative(CheckReport& report, std::size_t window,
                     const std::optional<ResidualEntry>& first_nonzero);

}  // namespace toda_crystal
