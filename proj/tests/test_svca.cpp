#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "frost/metrics.hpp"
#include "frost/solver.hpp"
#include "frost/svca.hpp"
#include "oracles.hpp"

using namespace frost;

namespace {

// Noiseless block-constant graph: A(i,j) = theta(k_i, k_j) with unit
// propensities, diagonal included, so A factors exactly.
Graph block_constant_graph(const std::vector<int>& sizes,
                           const std::vector<std::vector<std::int64_t>>& theta,
                           std::vector<int>* labels_out = nullptr) {
  int n = 0;
  for (int s : sizes) n += s;
  std::vector<int> labels;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    labels.insert(labels.end(), sizes[k], static_cast<int>(k));
  std::vector<Graph::Entry> entries;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::int64_t m = theta[labels[i]][labels[j]];
      if (m > 0) entries.push_back({i, j, m});
    }
  if (labels_out) *labels_out = labels;
  return Graph::build(n, std::move(entries));
}

double subspace_projection_gap(const Basis& basis, const std::vector<std::vector<double>>& span) {
  // Largest deviation of P*s from s over the expected span vectors.
  const int n = basis.vectors.rows;
  double worst = 0.0;
  for (const auto& s : span) {
    std::vector<double> proj(n, 0.0);
    for (int c = 0; c < basis.vectors.cols; ++c) {
      const double* bc = basis.vectors.col(c);
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += bc[i] * s[i];
      for (int i = 0; i < n; ++i) proj[i] += d * bc[i];
    }
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(proj[i] - s[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("dominant subspace of the identity converges instantly") {
  std::vector<Graph::Entry> entries;
  for (int i = 0; i < 6; ++i) entries.push_back({i, i, 1});
  const Graph g = Graph::build(6, std::move(entries));
  const Basis basis = dominant_subspace(g, 2, {});
  CHECK(basis.values[0] == doctest::Approx(1.0));
  CHECK(basis.values[1] == doctest::Approx(1.0));
  // Orthonormal columns.
  double dot = 0.0, n0 = 0.0;
  for (int i = 0; i < 6; ++i) {
    dot += basis.vectors(i, 0) * basis.vectors(i, 1);
    n0 += basis.vectors(i, 0) * basis.vectors(i, 0);
  }
  CHECK(dot == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(n0 == doctest::Approx(1.0));
}

TEST_CASE("two 2-cliques with self-interaction span their indicators") {
  const Graph g = block_constant_graph({2, 2}, {{1, 0}, {0, 1}});
  const Basis basis = dominant_subspace(g, 2, {});
  CHECK(basis.values[0] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(basis.values[1] == doctest::Approx(2.0).epsilon(1e-7));
  const double inv = std::sqrt(0.5);
  CHECK(subspace_projection_gap(basis, {{inv, inv, 0, 0}, {0, 0, inv, inv}}) < 1e-6);
}

TEST_CASE("single edge graph has the symmetric eigenvector") {
  const Graph g = Graph::build(2, {{0, 1, 1}});
  const Basis basis = dominant_subspace(g, 1, {});
  CHECK(basis.values[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(basis.vectors(0, 0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-7));
  CHECK(std::abs(basis.vectors(1, 0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-7));
  CHECK(basis.vectors(0, 0) == doctest::Approx(basis.vectors(1, 0)).epsilon(1e-7));
}

TEST_CASE("eigensolver reports non-convergence with the residual") {
  const Graph g = oracle::random_multigraph(20, 3, 0.3);
  SvcaConfig cfg;
  cfg.eigensolver_tol = 1e-300;
  cfg.eigensolver_max_iter = 2;
  CHECK_THROWS_WITH_AS(dominant_subspace(g, 3, cfg), doctest::Contains("residual"),
                       NumericalError);
}

TEST_CASE("svca_select with p = n averages every column") {
  const Graph g = oracle::random_multigraph(9, 5, 0.4);
  SvcaConfig cfg;
  cfg.p = 9;
  const DenseMatrix w = svca_select(g, 1, cfg);
  for (int i = 0; i < 9; ++i) {
    double mean = 0.0;
    for (int j = 0; j < 9; ++j) mean += static_cast<double>(g.entry(i, j));
    mean /= 9.0;
    CHECK(w(i, 0) == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("noiseless two-block selection recovers the profiles") {
  std::vector<int> labels;
  const Graph g = block_constant_graph({10, 10}, {{2, 0}, {0, 2}}, &labels);
  SvcaConfig cfg;
  cfg.p = 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const DenseMatrix w = svca_select(g, 2, cfg);
    // Each column is a positive multiple of one community profile.
    for (int k = 0; k < 2; ++k) {
      double in0 = 0.0, in1 = 0.0;
      for (int i = 0; i < 20; ++i) (labels[i] == 0 ? in0 : in1) += w(i, k);
      const bool pure = (in0 > 0 && in1 == 0.0) || (in1 > 0 && in0 == 0.0);
      CHECK(pure);
    }
  }
}

TEST_CASE("five-node instance: selected columns avoid the isolated node") {
  const Graph g = oracle::example1();
  SvcaConfig cfg;
  cfg.p = 2;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    cfg.seed = seed;
    const DenseMatrix w = svca_select(g, 2, cfg);
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(w(4, k)) < 1e-9);
      const bool block01 = w(0, k) > 1e-9 && std::abs(w(2, k)) < 1e-9;
      const bool block23 = w(2, k) > 1e-9 && std::abs(w(0, k)) < 1e-9;
      CHECK((block01 || block23));
    }
  }
}

TEST_CASE("onmf assignment") {
  std::vector<int> labels;
  const Graph g = block_constant_graph({6, 4}, {{3, 1}, {1, 3}}, &labels);

  SUBCASE("exact centroids give a zero-error factorization") {
    // Profile of community k = any of its columns (all identical here).
    DenseMatrix w(10, 2);
    for (int i = 0; i < 10; ++i) {
      w(i, 0) = static_cast<double>(g.entry(i, 0));
      w(i, 1) = static_cast<double>(g.entry(i, 9));
    }
    auto [z, theta] = onmf_assign(g, w);
    CHECK(frobenius_error(g, z, theta) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(ami_max(z.community, labels) == doctest::Approx(1.0));
  }
  SUBCASE("zero centroid columns are dropped") {
    DenseMatrix w(10, 3);
    for (int i = 0; i < 10; ++i) {
      w(i, 0) = static_cast<double>(g.entry(i, 0));
      w(i, 2) = static_cast<double>(g.entry(i, 9));
    }
    auto [z, theta] = onmf_assign(g, w);
    CHECK(z.r == 2);
  }
}

TEST_CASE("isolated nodes become zero rows") {
  const Graph g = Graph::build(4, {{0, 1, 2}, {0, 0, 2}, {1, 1, 2}});  // node 2, 3 isolated
  DenseMatrix w(4, 1);
  w(0, 0) = w(1, 0) = 1.0;
  auto [z, theta] = onmf_assign(g, w);
  CHECK(z.weight[2] == 0.0);
  CHECK(z.weight[3] == 0.0);
  CHECK(z.weight[0] > 0.0);
}

TEST_CASE("full-rank path graph with p=1 factors exactly at r=n") {
  const Graph g = Graph::build(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  SvcaConfig cfg;
  cfg.p = 1;
  const SvcaInit init = svca_init(g, 4, cfg);
  CHECK(frobenius_error(g, init.z, init.theta) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("svca_init is deterministic and recovers planted blocks") {
  std::vector<int> labels;
  const Graph g =
      block_constant_graph({12, 9, 9}, {{4, 1, 0}, {1, 4, 1}, {0, 1, 4}}, &labels);
  SvcaConfig cfg;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const SvcaInit a = svca_init(g, 3, cfg);
    CHECK(ami_max(a.partition.assignment, labels) == doctest::Approx(1.0));
    if (seed < 5) {
      const SvcaInit b = svca_init(g, 3, cfg);
      CHECK(a.partition.assignment == b.partition.assignment);
    }
  }
}

TEST_CASE("selection weights are nonnegative") {
  const Graph g = oracle::random_multigraph(15, 11, 0.3);
  const DenseMatrix w = svca_select(g, 3, {});
  for (double v : w.a) CHECK(v >= 0.0);
}

TEST_CASE("cached basis reproduces the uncached result") {
  const Graph g = oracle::random_multigraph(15, 2, 0.3);
  SvcaConfig cfg;
  cfg.seed = 7;
  const Basis basis = dominant_subspace(g, 3, cfg);
  const SvcaInit with_cache = svca_init(g, 3, cfg, &basis);
  const SvcaInit without = svca_init(g, 3, cfg);
  CHECK(with_cache.partition.assignment == without.partition.assignment);
}
