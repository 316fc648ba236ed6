#pragma once

#include "toda_crystal/report.hpp"
#include "toda_crystal/sector.hpp"

namespace toda_crystal {

/// [V^(k)_m, V^(l)_n] against the quantum torus relation on the certified
/// window. When k + l = 0 and m + n = 0 the displayed c-number is singular;
/// the check then requires the commutator to be a multiple of the identity
/// and records that multiple as evidence ("central").
CheckReport commutator_check(int k, int m, int l, int n, const SectorConfig& config);

enum class ShiftVariant { kG, kGPrime };

/// First shift symmetry in one-sided (intertwining) form, e.g. for kG
///   G_-G_+ (V^(k)_m - d_{m,0} c_k) = (-1)^k (V^(k)_{m+k} - d_{m+k,0} c_k) G_-G_+
/// with c_k = q^k / (1 - q^k). kGPrime uses G'_-G'_+, V^(-k), 1 / (1 - q^k)
/// and no sign. Throws std::invalid_argument unless k >= 1.
CheckReport first_shift_check(ShiftVariant variant, int k, int m,
                              const SectorConfig& config);

/// p^{w(lambda) - w(mu)} V^(k)_m = V^(k-m)_m entrywise, w the W_0 eigenvalue.
CheckReport second_shift_check(int k, int m, const SectorConfig& config);

}  // namespace toda_crystal
