#include "toda_crystal/sector_operator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace toda_crystal {

ExactnessCertificate::ExactnessCertificate(int cutoff, std::vector<Chain> chains)
    : cutoff_(cutoff), chains_(std::move(chains)) {}

ExactnessCertificate ExactnessCertificate::primitive(int cutoff, ShiftRange range) {
  return ExactnessCertificate(cutoff, {Chain{range}});
}

bool ExactnessCertificate::certifies(int row_energy, int col_energy) const {
  if (row_energy > cutoff_ || col_energy > cutoff_) return false;
  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  for (const Chain& chain : chains_) {
    const std::size_t r = chain.size();
    // suffix[j] = column-side bound for the split just left of factor j.
    std::vector<long> suffix(r + 1, col_energy);
    for (std::size_t j = r; j-- > 0;) {
      const auto& f = chain[j];
      suffix[j] = (!f.hi || suffix[j + 1] >= kInf)
                      ? kInf
                      : suffix[j + 1] + std::max(0, *f.hi);
    }
    long row_bound = row_energy;
    for (std::size_t j = 0; j + 1 < r; ++j) {
      const auto& f = chain[j];
      row_bound = (!f.lo || row_bound >= kInf) ? kInf
                                               : row_bound + std::max(0, -*f.lo);
      if (std::min(row_bound, suffix[j + 1]) > cutoff_) return false;
    }
  }
  return true;
}

ExactnessCertificate ExactnessCertificate::then(
    const ExactnessCertificate& right) const {
  std::vector<Chain> chains;
  chains.reserve(chains_.size() * right.chains_.size());
  for (const Chain& a : chains_) {
    for (const Chain& b : right.chains_) {
      Chain c = a;
      c.insert(c.end(), b.begin(), b.end());
      chains.push_back(std::move(c));
    }
  }
  return ExactnessCertificate(std::min(cutoff_, right.cutoff_), std::move(chains));
}

namespace {

bool same_range(const ShiftRange& a, const ShiftRange& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

bool same_chain(const ExactnessCertificate::Chain& a,
                const ExactnessCertificate::Chain& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), same_range);
}

}  // namespace

ExactnessCertificate ExactnessCertificate::combine(
    const ExactnessCertificate& other) const {
  std::vector<Chain> chains = chains_;
  for (const Chain& c : other.chains_) {
    const bool seen = std::any_of(chains.begin(), chains.end(),
                                  [&](const Chain& x) { return same_chain(x, c); });
    if (!seen) chains.push_back(c);
  }
  return ExactnessCertificate(std::min(cutoff_, other.cutoff_), std::move(chains));
}

ShiftRange ExactnessCertificate::total_range() const {
  ShiftRange hull{0, 0};
  bool first = true;
  for (const Chain& chain : chains_) {
    std::optional<int> lo = 0, hi = 0;
    for (const auto& f : chain) {
      lo = (lo && f.lo) ? std::optional<int>(*lo + *f.lo) : std::nullopt;
      hi = (hi && f.hi) ? std::optional<int>(*hi + *f.hi) : std::nullopt;
    }
    if (first) {
      hull = {lo, hi};
      first = false;
      continue;
    }
    hull.lo = (hull.lo && lo) ? std::optional<int>(std::min(*hull.lo, *lo)) : std::nullopt;
    hull.hi = (hull.hi && hi) ? std::optional<int>(std::max(*hull.hi, *hi)) : std::nullopt;
  }
  return hull;
}

SectorOperator::SectorOperator(std::shared_ptr<const SectorBasis> basis,
                               SectorConfig config, ShiftRange range)
    : basis_(std::move(basis)),
      config_(std::move(config)),
      rows_(basis_->size()),
      cert_(ExactnessCertificate::primitive(config_.cutoff, range)) {}

SectorOperator SectorOperator::identity(std::shared_ptr<const SectorBasis> basis,
                                        const SectorConfig& config,
                                        const Scalar& scale) {
  SectorOperator id(std::move(basis), config, ShiftRange::banded(0));
  for (std::size_t i = 0; i < id.dim(); ++i) id.add(i, i, scale);
  id.finalize();
  return id;
}

ShiftClass SectorOperator::shift_class() const {
  const ShiftRange r = cert_.total_range();
  if (r.lo && r.hi && *r.lo == *r.hi) return ShiftClass::kBanded;
  if (r.hi && *r.hi <= 0) return ShiftClass::kLowering;
  if (r.lo && *r.lo >= 0) return ShiftClass::kRaising;
  return ShiftClass::kMixed;
}

std::optional<int> SectorOperator::band() const {
  const ShiftRange r = cert_.total_range();
  if (r.lo && r.hi && *r.lo == *r.hi) return r.lo;
  return std::nullopt;
}

Scalar SectorOperator::entry(std::size_t r, std::size_t c) const {
  const Row& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  return (it != row.end() && it->first == c) ? it->second : Scalar(0);
}

bool SectorOperator::certified(std::size_t r, std::size_t c) const {
  return cert_.certifies(basis_->energy(r), basis_->energy(c));
}

std::size_t SectorOperator::nonzeros() const {
  std::size_t n = 0;
  for (const Row& r : rows_) n += r.size();
  return n;
}

void SectorOperator::add(std::size_t r, std::size_t c, const Scalar& v) {
  if (v != 0) rows_[r].emplace_back(c, v);
}

void SectorOperator::finalize() {
  for (Row& row : rows_) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Row merged;
    merged.reserve(row.size());
    for (auto& [c, v] : row) {
      if (!merged.empty() && merged.back().first == c)
        merged.back().second += v;
      else
        merged.emplace_back(c, std::move(v));
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    row = std::move(merged);
  }
}

SectorOperator& SectorOperator::operator*=(const Scalar& c) {
  for (Row& row : rows_) {
    if (c == 0) {
      row.clear();
      continue;
    }
    for (auto& e : row) e.second *= c;
  }
  return *this;
}

void SectorOperator::require_compatible(const SectorOperator& o) const {
  if (!(config_ == o.config_) || basis_->size() != o.basis_->size())
    throw std::invalid_argument("sector operators live in different sectors");
}

SectorOperator SectorOperator::combine_with(const SectorOperator& o, int sign) const {
  require_compatible(o);
  SectorOperator out = *this;
  out.cert_ = cert_.combine(o.cert_);
  for (std::size_t r = 0; r < o.rows_.size(); ++r)
    for (const auto& [c, v] : o.rows_[r]) out.add(r, c, sign > 0 ? v : Scalar(-v));
  out.finalize();
  return out;
}

SectorOperator operator+(const SectorOperator& a, const SectorOperator& b) {
  return a.combine_with(b, +1);
}

SectorOperator operator-(const SectorOperator& a, const SectorOperator& b) {
  return a.combine_with(b, -1);
}

SectorOperator operator*(const SectorOperator& a, const SectorOperator& b) {
  a.require_compatible(b);
  SectorOperator out(a.basis_, a.config_, ShiftRange::banded(0));
  out.cert_ = a.cert_.then(b.cert_);
  const std::size_t n = a.dim();
  std::vector<Scalar> acc(n);
  std::vector<char> touched(n, 0);
  std::vector<std::size_t> cols;
  Scalar tmp;
  for (std::size_t r = 0; r < n; ++r) {
    cols.clear();
    for (const auto& [k, av] : a.rows_[r]) {
      for (const auto& [c, bv] : b.rows_[k]) {
        tmp = av * bv;
        if (!touched[c]) {
          touched[c] = 1;
          acc[c] = tmp;
          cols.push_back(c);
        } else {
          acc[c] += tmp;
        }
      }
    }
    std::sort(cols.begin(), cols.end());
    auto& row = out.rows_[r];
    for (std::size_t c : cols) {
      if (acc[c] != 0) row.emplace_back(c, acc[c]);
      touched[c] = 0;
    }
  }
  return out;
}

nlohmann::json SectorOperator::dump() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [c, v] : rows_[r]) {
      rows.push_back({{"row", basis_->shape(r).parts()},
                      {"col", basis_->shape(c).parts()},
                      {"val", to_string(v)},
                      {"certified", certified(r, c)}});
    }
  }
  return rows;
}

ProductResult op_product(std::span<const SectorOperator> factors) {
  if (factors.empty()) throw std::invalid_argument("op_product needs factors");
  SectorOperator acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = acc * factors[i];
  ExactnessCertificate cert = acc.certificate();
  return {std::move(acc), std::move(cert)};
}

SectorOperator commutator(const SectorOperator& a, const SectorOperator& b) {
  return a * b - b * a;
}

}  // namespace toda_crystal
