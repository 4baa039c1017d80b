#pragma once

#include <random>
#include <vector>

#include "frost/graph.hpp"

namespace frost {

/// Column-major dense matrix; just enough linear algebra for the subspace
/// iteration eigensolver.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int rows_, int cols_)
      : rows(rows_), cols(cols_), a(static_cast<std::size_t>(rows_) * cols_, 0.0) {}

  double operator()(int i, int j) const { return a[static_cast<std::size_t>(j) * rows + i]; }
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(j) * rows + i]; }

  const double* col(int j) const { return a.data() + static_cast<std::size_t>(j) * rows; }
  double* col(int j) { return a.data() + static_cast<std::size_t>(j) * rows; }
};

/// Y = A * X with the sparse symmetric adjacency.
DenseMatrix spmm(const Graph& g, const DenseMatrix& x);

/// X^T * Y (small result).
DenseMatrix gram(const DenseMatrix& x, const DenseMatrix& y);

/// X * S for a small S.
DenseMatrix mul_small(const DenseMatrix& x, const DenseMatrix& s);

/// In-place modified Gram-Schmidt (two passes). Columns that lose rank are
/// replaced by random vectors orthogonal to the rest, so the result always
/// has orthonormal columns.
void orthonormalize_columns(DenseMatrix& x, std::mt19937_64& rng);

struct SymmetricEigen {
  std::vector<double> values;
  DenseMatrix vectors;  ///< column k is the eigenvector of values[k]
};

/// Cyclic Jacobi for small symmetric matrices; eigenpairs sorted by
/// decreasing |value|, ties toward the larger signed value.
SymmetricEigen jacobi_eigen(const DenseMatrix& s);

}  // namespace frost
