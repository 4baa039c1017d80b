#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "frost/dense.hpp"
#include "frost/graph.hpp"
#include "frost/model.hpp"

namespace frost {

/// Thrown when an iterative numerical routine fails to converge or runs out
/// of retries.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SvcaConfig {
  /// Columns averaged per component; <= 0 selects max(2, floor(0.1 n / r)).
  int p = 0;
  std::uint64_t seed = 0;
  double eigensolver_tol = 1e-8;
  int eigensolver_max_iter = 1000;
};

/// Orthonormal basis of the dominant (largest |eigenvalue|) r-dimensional
/// invariant subspace of A, with the Ritz values.
struct Basis {
  DenseMatrix vectors;  ///< n x r
  std::vector<double> values;
};

/// Blocked subspace iteration with two guard vectors; converged when the
/// Ritz residual ||A V - V (V^T A V)||_F / ||A V||_F drops below the
/// configured tolerance.
Basis dominant_subspace(const Graph& g, int r, const SvcaConfig& cfg = {});

/// Greedy column selection: each component averages the p columns of A that
/// score highest against a random direction from the dominant subspace,
/// projected orthogonal to the components already selected. Both direction
/// signs are tried and the better top-p sum kept. Deterministic under seed.
DenseMatrix svca_select(const Graph& g, int r, const SvcaConfig& cfg = {},
                        const Basis* cached = nullptr);

/// Closed-form orthogonal-NMF recovery: each column of A goes to the
/// centroid with the smallest angle; its weight is the one-column
/// least-squares fit. Zero columns of A become zero rows; zero centroids are
/// dropped (reducing r). Returns normalized factors with theta = Z^T A Z.
std::pair<ScaledAssignment, MixingMatrix> onmf_assign(const Graph& g, const DenseMatrix& w);

struct SvcaInit {
  ScaledAssignment z;
  MixingMatrix theta;
  Partition partition;  ///< zero rows resolved uniformly at random under seed
};

SvcaInit svca_init(const Graph& g, int r, const SvcaConfig& cfg = {},
                   const Basis* cached = nullptr);

}  // namespace frost
