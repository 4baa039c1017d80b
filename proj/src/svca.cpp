#include "frost/svca.hpp"

#include "frost/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

namespace frost {

Basis dominant_subspace(const Graph& g, int r, const SvcaConfig& cfg) {
  const int n = g.node_count();
  if (r < 1) throw std::invalid_argument("dominant_subspace: r must be >= 1");
  if (r > n) throw std::invalid_argument("dominant_subspace: r exceeds node count");
  const int block = std::min(n, r + 2);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseMatrix v(n, block);
  for (double& x : v.a) x = gauss(rng);
  orthonormalize_columns(v, rng);

  double residual = 0.0;
  for (int it = 0; it < cfg.eigensolver_max_iter; ++it) {
    DenseMatrix av = spmm(g, v);
    DenseMatrix h = gram(v, av);
    for (int i = 0; i < block; ++i)
      for (int j = i + 1; j < block; ++j) {
        const double m = 0.5 * (h(i, j) + h(j, i));
        h(i, j) = h(j, i) = m;
      }
    const SymmetricEigen eig = jacobi_eigen(h);

    DenseMatrix q(block, r);
    for (int k = 0; k < r; ++k)
      for (int i = 0; i < block; ++i) q(i, k) = eig.vectors(i, k);
    DenseMatrix ritz = mul_small(v, q);       // V Q, the Ritz vectors
    DenseMatrix a_ritz = mul_small(av, q);    // A V Q, exactly A * ritz

    double res_sq = 0.0, norm_sq = 0.0;
    for (int k = 0; k < r; ++k) {
      const double lambda = eig.values[k];
      const double* rc = ritz.col(k);
      const double* ac = a_ritz.col(k);
      for (int i = 0; i < n; ++i) {
        const double d = ac[i] - lambda * rc[i];
        res_sq += d * d;
        norm_sq += ac[i] * ac[i];
      }
    }
    residual = norm_sq > 0.0 ? std::sqrt(res_sq / norm_sq) : 0.0;
    if (residual < cfg.eigensolver_tol) {
      Basis out;
      out.vectors = std::move(ritz);
      out.values.assign(eig.values.begin(), eig.values.begin() + r);
      return out;
    }
    v = std::move(av);
    orthonormalize_columns(v, rng);
  }
  std::ostringstream msg;
  msg << "dominant_subspace: no convergence after " << cfg.eigensolver_max_iter
      << " iterations (residual " << residual << ")";
  throw NumericalError(msg.str());
}

namespace {

int default_p(int n, int r) {
  return std::max(2, static_cast<int>(std::floor(0.1 * static_cast<double>(n) / r)));
}

// Indices of the p largest scores; ties resolved toward smaller indices.
std::vector<int> top_p(const std::vector<double>& score, int p, bool negate) {
  std::vector<int> idx(score.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto cmp = [&](int a, int b) {
    const double sa = negate ? -score[a] : score[a];
    const double sb = negate ? -score[b] : score[b];
    return sa != sb ? sa > sb : a < b;
  };
  std::partial_sort(idx.begin(), idx.begin() + p, idx.end(), cmp);
  idx.resize(p);
  return idx;
}

}  // namespace

DenseMatrix svca_select(const Graph& g, int r, const SvcaConfig& cfg, const Basis* cached) {
  const int n = g.node_count();
  if (r < 1 || r > n) throw std::invalid_argument("svca_select: invalid community count");
  const int p = std::min(cfg.p > 0 ? cfg.p : default_p(n, r), n);

  Basis local;
  if (!cached) local = dominant_subspace(g, r, cfg);
  const Basis& basis = cached ? *cached : local;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DenseMatrix w(n, r);
  // Orthonormalized span of the columns selected so far; directions are
  // projected against this, not the raw (non-orthogonal) columns.
  DenseMatrix sel_ortho(n, r);
  int n_ortho = 0;
  std::vector<double> u(n), score(n);

  auto project_out_selected = [&](std::vector<double>& vec) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < n_ortho; ++c) {
        const double* sc = sel_ortho.col(c);
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += sc[i] * vec[i];
        for (int i = 0; i < n; ++i) vec[i] -= d * sc[i];
      }
    }
  };

  for (int k = 0; k < r; ++k) {
    bool found = false;
    for (int attempt = 0; attempt < 32 && !found; ++attempt) {
      // Random unit direction inside the dominant subspace.
      std::fill(u.begin(), u.end(), 0.0);
      for (int c = 0; c < basis.vectors.cols; ++c) {
        const double coef = gauss(rng);
        const double* bc = basis.vectors.col(c);
        for (int i = 0; i < n; ++i) u[i] += coef * bc[i];
      }
      project_out_selected(u);
      double nu = 0.0;
      for (double x : u) nu += x * x;
      nu = std::sqrt(nu);
      if (nu < 1e-10) continue;
      for (double& x : u) x /= nu;

      // score(j) = <A(:,j), u>, one sparse product.
      for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        auto mu = g.multiplicities(i);
        double s = 0.0;
        for (std::size_t e = 0; e < nb.size(); ++e) s += static_cast<double>(mu[e]) * u[nb[e]];
        score[i] = s;
      }

      const std::vector<int> plus = top_p(score, p, false);
      const std::vector<int> minus = top_p(score, p, true);
      double sum_plus = 0.0, sum_minus = 0.0;
      for (int j : plus) sum_plus += score[j];
      for (int j : minus) sum_minus -= score[j];
      const std::vector<int>& pick = sum_plus >= sum_minus ? plus : minus;
      if (std::max(sum_plus, sum_minus) <= 1e-10) continue;  // direction sees nothing

      double* wc = w.col(k);
      std::fill(wc, wc + n, 0.0);
      for (int j : pick) {
        auto nb = g.neighbors(j);
        auto mu = g.multiplicities(j);
        for (std::size_t e = 0; e < nb.size(); ++e)
          wc[nb[e]] += static_cast<double>(mu[e]);  // column j of the symmetric A
      }
      double nw = 0.0;
      for (int i = 0; i < n; ++i) {
        wc[i] /= p;
        nw += wc[i] * wc[i];
      }
      if (nw <= 0.0) continue;
      // Grow the orthonormal span; a dependent column adds nothing.
      std::vector<double> fresh(wc, wc + n);
      project_out_selected(fresh);
      double nf = 0.0;
      for (double x : fresh) nf += x * x;
      nf = std::sqrt(nf);
      if (nf > 1e-10 * std::sqrt(nw)) {
        double* oc = sel_ortho.col(n_ortho++);
        for (int i = 0; i < n; ++i) oc[i] = fresh[i] / nf;
      }
      found = true;
    }
    if (!found)
      throw NumericalError("svca_select: no informative direction after 32 retries (component " +
                           std::to_string(k) + ")");
  }
  return w;
}

std::pair<ScaledAssignment, MixingMatrix> onmf_assign(const Graph& g, const DenseMatrix& w) {
  const int n = g.node_count();
  if (w.rows != n) throw std::invalid_argument("onmf_assign: centroid row count mismatch");

  std::vector<int> keep;
  std::vector<double> norm_sq;
  for (int k = 0; k < w.cols; ++k) {
    double s = 0.0;
    const double* wc = w.col(k);
    for (int i = 0; i < n; ++i) s += wc[i] * wc[i];
    if (s > 0.0) {
      keep.push_back(k);
      norm_sq.push_back(s);
    }
  }
  if (keep.empty()) throw std::invalid_argument("onmf_assign: every centroid column is zero");
  if (static_cast<int>(keep.size()) < w.cols)
    std::cerr << "onmf_assign: dropped " << w.cols - keep.size() << " zero centroid column(s)\n";

  const int r = static_cast<int>(keep.size());
  ScaledAssignment z;
  z.r = r;
  z.community.assign(n, 0);
  z.weight.assign(n, 0.0);

  // <A(:,j), W(:,k)> for all kept centroids in one pass per centroid.
  DenseMatrix dots(n, r);
  for (int k = 0; k < r; ++k) {
    const double* wc = w.col(keep[k]);
    double* dc = dots.col(k);
    for (int i = 0; i < n; ++i) {
      auto nb = g.neighbors(i);
      auto mu = g.multiplicities(i);
      double s = 0.0;
      for (std::size_t e = 0; e < nb.size(); ++e) s += static_cast<double>(mu[e]) * wc[nb[e]];
      dc[i] = s;
    }
  }

  for (int j = 0; j < n; ++j) {
    if (g.degree(j) == 0) continue;  // zero column of A stays a zero row
    int best = 0;
    double best_cos = dots(j, 0) / std::sqrt(norm_sq[0]);
    for (int k = 1; k < r; ++k) {
      const double c = dots(j, k) / std::sqrt(norm_sq[k]);
      if (c > best_cos) {
        best_cos = c;
        best = k;
      }
    }
    z.community[j] = best;
    z.weight[j] = std::max(dots(j, best) / norm_sq[best], 0.0);
  }

  normalize_columns(z);
  return {z, update_theta(g, z)};
}

SvcaInit svca_init(const Graph& g, int r, const SvcaConfig& cfg, const Basis* cached) {
  const DenseMatrix w = svca_select(g, r, cfg, cached);
  SvcaInit out;
  std::tie(out.z, out.theta) = onmf_assign(g, w);
  out.partition = to_partition(out.z, ZeroRowPolicy::random, cfg.seed);
  return out;
}

}  // namespace frost
