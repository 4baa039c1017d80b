#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace frost {

/// Joint label-count table between two labelings over the same node set.
/// Pairs where either side is negative (unlabeled) are excluded.
struct Contingency {
  int ra = 0;
  int rb = 0;
  std::vector<std::int64_t> counts;  ///< ra x rb, row-major
  std::vector<std::int64_t> row_sum;
  std::vector<std::int64_t> col_sum;
  std::int64_t total = 0;

  static Contingency from(std::span<const int> a, std::span<const int> b);

  std::int64_t at(int u, int v) const { return counts[static_cast<std::size_t>(u) * rb + v]; }

  double entropy_a() const;
  double entropy_b() const;
  double mutual_information() const;

  /// true when the table is a (partial) permutation matrix, i.e. the two
  /// labelings are identical up to renaming.
  bool is_relabeling() const;
};

/// MI / max(Ha, Hb); 1 when both entropies vanish, 0 when exactly one does.
double nmi(std::span<const int> a, std::span<const int> b);

/// Expected mutual information under the hypergeometric permutation model,
/// evaluated by the exact closed-form sum.
double expected_mi(const Contingency& c);

/// (MI - E[MI]) / (max(Ha, Hb) - E[MI]); when the denominator degenerates,
/// 1 for identical partitions and 0 otherwise.
double ami_max(std::span<const int> a, std::span<const int> b);

}  // namespace frost
