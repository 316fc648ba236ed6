#include "toda_crystal/partition.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace toda_crystal {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0 || (i > 0 && parts_[i] > parts_[i - 1])) {
      throw std::invalid_argument(
          "partition parts must be positive and weakly decreasing");
    }
    weight_ += parts_[i];
  }
}

Partition::Partition(std::initializer_list<int> parts)
    : Partition(std::vector<int>(parts)) {}

int Partition::kappa() const noexcept {
  int k = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const int row = static_cast<int>(i) + 1;
    k += parts_[i] * (parts_[i] - 2 * row + 1);
  }
  return k;
}

Partition Partition::conjugate() const {
  std::vector<int> cols(parts_.empty() ? 0 : parts_.front(), 0);
  for (int p : parts_)
    for (int j = 0; j < p; ++j) ++cols[j];
  return Partition(std::move(cols));
}

std::vector<int> Partition::hook_multiset() const {
  const Partition t = conjugate();
  std::vector<int> hooks;
  hooks.reserve(weight_);
  for (std::size_t i = 1; i <= parts_.size(); ++i) {
    for (int j = 1; j <= parts_[i - 1]; ++j) {
      const int arm = parts_[i - 1] - j;
      const int leg = t.part(j) - static_cast<int>(i);
      hooks.push_back(arm + leg + 1);
    }
  }
  std::sort(hooks.begin(), hooks.end(), std::greater<>());
  return hooks;
}

std::string Partition::to_json() const {
  std::string out = "[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts_[i]);
  }
  out += ']';
  return out;
}

std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
  if (auto c = a.weight_ <=> b.weight_; c != 0) return c;
  // Descending lexicographic: larger leading parts come first.
  return std::lexicographical_compare_three_way(
      b.parts_.begin(), b.parts_.end(), a.parts_.begin(), a.parts_.end());
}

namespace {

// Partitions of n with parts <= max_part, appended in descending lex order.
void partitions_of(int n, int max_part, std::vector<int>& prefix,
                   std::vector<Partition>& out) {
  if (n == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    prefix.push_back(p);
    partitions_of(n - p, p, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n_max, EnumerationMode mode) {
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  std::vector<Partition> out;
  std::vector<int> prefix;
  const int lo = mode == EnumerationMode::kExactWeight ? n_max : 0;
  for (int n = lo; n <= n_max; ++n) partitions_of(n, n, prefix, out);
  return out;
}

}  // namespace toda_crystal
