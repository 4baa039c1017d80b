#include "frost/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace frost {

DenseMatrix spmm(const Graph& g, const DenseMatrix& x) {
  DenseMatrix y(x.rows, x.cols);
  for (int j = 0; j < x.cols; ++j) {
    const double* xc = x.col(j);
    double* yc = y.col(j);
    for (int i = 0; i < g.node_count(); ++i) {
      auto nb = g.neighbors(i);
      auto mu = g.multiplicities(i);
      double s = 0.0;
      for (std::size_t k = 0; k < nb.size(); ++k) s += static_cast<double>(mu[k]) * xc[nb[k]];
      yc[i] = s;
    }
  }
  return y;
}

DenseMatrix gram(const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix g(x.cols, y.cols);
  for (int j = 0; j < y.cols; ++j)
    for (int i = 0; i < x.cols; ++i) {
      const double* xi = x.col(i);
      const double* yj = y.col(j);
      double s = 0.0;
      for (int k = 0; k < x.rows; ++k) s += xi[k] * yj[k];
      g(i, j) = s;
    }
  return g;
}

DenseMatrix mul_small(const DenseMatrix& x, const DenseMatrix& s) {
  DenseMatrix y(x.rows, s.cols);
  for (int j = 0; j < s.cols; ++j) {
    double* yc = y.col(j);
    for (int k = 0; k < x.cols; ++k) {
      const double c = s(k, j);
      if (c == 0.0) continue;
      const double* xc = x.col(k);
      for (int i = 0; i < x.rows; ++i) yc[i] += c * xc[i];
    }
  }
  return y;
}

namespace {

double norm(const double* v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

void mgs_pass(DenseMatrix& x, int j) {
  for (int k = 0; k < j; ++k) {
    const double* xk = x.col(k);
    double* xj = x.col(j);
    double d = 0.0;
    for (int i = 0; i < x.rows; ++i) d += xk[i] * xj[i];
    for (int i = 0; i < x.rows; ++i) xj[i] -= d * xk[i];
  }
}

}  // namespace

void orthonormalize_columns(DenseMatrix& x, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < x.cols; ++j) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      mgs_pass(x, j);
      mgs_pass(x, j);  // re-orthogonalize for stability
      double nj = norm(x.col(j), x.rows);
      if (nj > 1e-12) {
        double inv = 1.0 / nj;
        double* xj = x.col(j);
        for (int i = 0; i < x.rows; ++i) xj[i] *= inv;
        break;
      }
      // Rank-deficient column: try a fresh random direction.
      double* xj = x.col(j);
      for (int i = 0; i < x.rows; ++i) xj[i] = gauss(rng);
    }
  }
}

SymmetricEigen jacobi_eigen(const DenseMatrix& s) {
  const int n = s.rows;
  DenseMatrix a = s;
  DenseMatrix v(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  const double stop = std::max(scale, 1.0) * 1e-14;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= stop * 1e-2) continue;
        const double apq = a(p, q);
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - sn * aiq;
          a(i, q) = sn * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - sn * aqi;
          a(q, i) = sn * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - sn * viq;
          v(i, q) = sn * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    double ai = std::abs(a(i, i)), aj = std::abs(a(j, j));
    if (ai != aj) return ai > aj;
    return a(i, i) > a(j, j);
  });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace frost
