#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "frost/graph.hpp"

namespace frost {

/// Compact factor Z with at most one nonzero per row: node i sits in
/// community `community[i]` with value `weight[i]` = Z(i, community[i]).
/// weight[i] == 0 marks a node participating in no community.
struct ScaledAssignment {
  std::vector<int> community;
  std::vector<double> weight;
  int r = 0;

  int node_count() const { return static_cast<int>(community.size()); }
};

/// Symmetric nonnegative r x r interaction matrix (dense, row-major).
struct MixingMatrix {
  int r = 0;
  std::vector<double> values;

  MixingMatrix() = default;
  explicit MixingMatrix(int r_) : r(r_), values(static_cast<std::size_t>(r_) * r_, 0.0) {}

  double operator()(int k, int l) const { return values[static_cast<std::size_t>(k) * r + l]; }
  double& operator()(int k, int l) { return values[static_cast<std::size_t>(k) * r + l]; }

  double max_asymmetry() const;
  double frobenius_norm_sq() const;
};

struct Partition {
  std::vector<int> assignment;
  int r = 0;

  int node_count() const { return static_cast<int>(assignment.size()); }
};

/// Scales each nonempty community so its weights satisfy sum of squares = 1.
/// Zero rows and empty communities are untouched.
void normalize_columns(ScaledAssignment& z);

/// Per-community sums of squared weights; 1.0 for every nonempty community
/// after normalization.
std::vector<double> column_norms_sq(const ScaledAssignment& z);

/// true when every nonempty community's squared-weight sum is within `tol`
/// of 1.
bool is_column_normalized(const ScaledAssignment& z, double tol = 1e-12);

/// (Z theta Z^T)(i,j) = w(i) * theta(v(i),v(j)) * w(j); 0 when either row is
/// zero.
double reconstruct_entry(const ScaledAssignment& z, const MixingMatrix& theta, int i, int j);

/// ||A - Z theta Z^T||_F^2. Uses the orthogonality expansion when columns are
/// normalized to 1e-12, otherwise evaluates the sum directly (organized over
/// nonzeros plus community blocks, exact for the disjoint-support Z).
double frobenius_error(const Graph& g, const ScaledAssignment& z, const MixingMatrix& theta);

enum class ZeroRowPolicy {
  random,     ///< unassigned nodes drawn uniformly from {0..r-1}
  error_out,  ///< throw, listing the offending nodes
  singleton,  ///< each unassigned node becomes a fresh community
};

Partition to_partition(const ScaledAssignment& z, ZeroRowPolicy policy, std::uint64_t seed = 0);

void save_partition(const Partition& p, const std::filesystem::path& path);
Partition load_partition(const std::filesystem::path& path);

/// JSON dump with arrays "v", "w" and row-major "theta".
void save_factors(const ScaledAssignment& z, const MixingMatrix& theta,
                  const std::filesystem::path& path);

}  // namespace frost
