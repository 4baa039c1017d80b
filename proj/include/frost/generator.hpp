#pragma once

#include <cstdint>
#include <vector>

#include "frost/graph.hpp"
#include "frost/model.hpp"

namespace frost {

enum class DegreeModel { uniform, power_law };

/// Planted-partition instance of the Poisson block model with degree
/// propensities.
struct PlantedSpec {
  int n = 0;
  int r = 1;
  /// Explicit community sizes summing to n; empty means balanced.
  std::vector<int> sizes;
  DegreeModel degrees = DegreeModel::uniform;
  double gamma = 2.0;   ///< power-law exponent for propensities
  double d_min = 10.0;  ///< propensity support (degree-like scale)
  double d_max = 50.0;
  double mu = 0.0;  ///< expected fraction of cross-community edges
  double avg_degree = 10.0;
  std::uint64_t seed = 0;
};

struct PlantedFactors {
  ScaledAssignment z;
  MixingMatrix theta;
  Partition partition;
};

/// Samples per-node propensities, normalizes them per community, and
/// calibrates theta so the expected total degree is n * avg_degree with a
/// cross-community edge fraction of exactly mu (off-diagonal mass uniform).
PlantedFactors build_planted_factors(const PlantedSpec& spec);

/// Poisson draw per node pair: A(i,j) ~ Poisson(rate(i,j)) above the
/// diagonal, self-edge counts ~ Poisson(rate(i,i)/2) doubled on the
/// diagonal. Block pairs with zero interaction are skipped.
Graph sample_graph(const ScaledAssignment& z, const MixingMatrix& theta, std::uint64_t seed);

}  // namespace frost
