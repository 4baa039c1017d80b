#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "frost/graph.hpp"
#include "frost/model.hpp"

namespace frost {

/// Sufficient statistics of the degree-corrected block model objective:
/// m(k,l) = sum_ij A(i,j) [p(i)=k][p(j)=l] (diagonal counts both orders, so
/// sum_kl m = total degree) and kappa(k) = sum_l m(k,l).
struct BlockStats {
  int r = 0;
  std::vector<std::int64_t> m;      ///< r x r, row-major, symmetric
  std::vector<std::int64_t> kappa;  ///< per-community degree sums

  std::int64_t at(int k, int l) const { return m[static_cast<std::size_t>(k) * r + l]; }
  std::int64_t& at(int k, int l) { return m[static_cast<std::size_t>(k) * r + l]; }
};

BlockStats block_stats(const Graph& g, const Partition& p);

/// L = sum_kl m_kl log(m_kl / (kappa_k kappa_l)), natural log, with the
/// conventions 0 log 0 = 0 and empty communities contributing 0.
double log_likelihood(const BlockStats& stats);

struct MoveDelta {
  int node = -1;
  int from = -1;
  int to = -1;
  double delta_ll = 0.0;
};

/// Objective change for moving node i to community `to` (`to` != p(i)),
/// touching only the stats rows/columns of the communities adjacent to i.
/// O(min(r, d(i)) + d(i)).
MoveDelta move_delta(const Graph& g, const Partition& p, const BlockStats& stats, int i, int to);

/// Integer-exact stats and partition update; applying a move and its reverse
/// restores the stats bit-for-bit.
void apply_move(const Graph& g, Partition& p, BlockStats& stats, int i, int to);

struct InferConfig {
  std::uint64_t seed = 0;
  int max_sweeps = 1000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct InferResult {
  Partition partition;
  double log_likelihood = 0.0;
  int sweeps = 0;
  bool timed_out = false;
};

/// Kernighan-Lin style passes: every node is moved exactly once per pass to
/// its best alternative community (even at a loss), the best prefix state is
/// restored, and passes repeat until one fails to improve.
InferResult kn_infer(const Graph& g, int r, Partition init, const InferConfig& cfg = {});

/// Simultaneous variant: best moves are computed against a frozen state and
/// all improving ones applied at once; falls back to the single best move
/// when the batch conflicts and lowers the objective.
InferResult klem_infer(const Graph& g, int r, Partition init, const InferConfig& cfg = {});

Partition random_partition(int n, int r, std::uint64_t seed);

}  // namespace frost
