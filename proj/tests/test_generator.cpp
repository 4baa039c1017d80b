#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "frost/generator.hpp"
#include "oracles.hpp"

using namespace frost;

namespace {

double lambda_total(const ScaledAssignment& z, const MixingMatrix& theta) {
  std::vector<double> colsum(z.r, 0.0);
  for (int i = 0; i < z.node_count(); ++i) colsum[z.community[i]] += z.weight[i];
  double total = 0.0;
  for (int k = 0; k < z.r; ++k)
    for (int l = 0; l < z.r; ++l) total += colsum[k] * theta(k, l) * colsum[l];
  return total;
}

std::pair<std::int64_t, std::int64_t> cross_and_total(const Graph& g, const Partition& p) {
  std::int64_t cross = 0;
  for (int i = 0; i < g.node_count(); ++i) {
    auto nb = g.neighbors(i);
    auto mu = g.multiplicities(i);
    for (std::size_t e = 0; e < nb.size(); ++e)
      if (p.assignment[i] != p.assignment[nb[e]]) cross += mu[e];
  }
  return {cross, g.total()};
}

}  // namespace

TEST_CASE("zero mixing gives a diagonal interaction matrix") {
  PlantedSpec spec;
  spec.n = 30;
  spec.r = 3;
  spec.mu = 0.0;
  spec.avg_degree = 6.0;
  const PlantedFactors f = build_planted_factors(spec);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      if (k != l) CHECK(f.theta(k, l) == 0.0);
  CHECK(lambda_total(f.z, f.theta) == doctest::Approx(30.0 * 6.0).epsilon(1e-9));
}

TEST_CASE("calibration hits the expected total and mixing exactly") {
  PlantedSpec spec;
  spec.n = 100;
  spec.r = 4;
  spec.mu = 0.3;
  spec.avg_degree = 12.0;
  spec.degrees = DegreeModel::power_law;
  spec.gamma = 2.0;
  spec.d_min = 5.0;
  spec.d_max = 50.0;
  spec.seed = 3;
  const PlantedFactors f = build_planted_factors(spec);
  CHECK(lambda_total(f.z, f.theta) == doctest::Approx(100.0 * 12.0).epsilon(1e-9));

  // Cross mass fraction is exactly mu.
  std::vector<double> colsum(f.z.r, 0.0);
  for (int i = 0; i < 100; ++i) colsum[f.z.community[i]] += f.z.weight[i];
  double cross = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      if (k != l) cross += colsum[k] * f.theta(k, l) * colsum[l];
  CHECK(cross == doctest::Approx(0.3 * 1200.0).epsilon(1e-9));
  for (double v : f.theta.values) CHECK(v >= 0.0);
}

TEST_CASE("single community carries all mass") {
  PlantedSpec spec;
  spec.n = 10;
  spec.r = 1;
  spec.avg_degree = 4.0;
  const PlantedFactors f = build_planted_factors(spec);
  CHECK(f.theta.r == 1);
  CHECK(lambda_total(f.z, f.theta) == doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("balanced two-block expectation: a quarter of the mass per block") {
  PlantedSpec spec;
  spec.n = 40;
  spec.r = 2;
  spec.mu = 0.0;
  spec.avg_degree = 8.0;
  const PlantedFactors f = build_planted_factors(spec);

  const int samples = 1000;
  std::vector<double> per_block(samples);
  for (int s = 0; s < samples; ++s) {
    const Graph g = sample_graph(f.z, f.theta, static_cast<std::uint64_t>(s));
    std::int64_t within0 = 0;
    for (int i = 0; i < 20; ++i) {
      auto nb = g.neighbors(i);
      auto mu = g.multiplicities(i);
      for (std::size_t e = 0; e < nb.size(); ++e)
        if (nb[e] < 20) within0 += mu[e];
    }
    per_block[s] = static_cast<double>(within0) / 2.0;  // ordered pairs -> edges
  }
  const double mean = std::accumulate(per_block.begin(), per_block.end(), 0.0) / samples;
  double var = 0.0;
  for (double v : per_block) var += (v - mean) * (v - mean);
  var /= samples - 1;
  const double sigma_mean = std::sqrt(var / samples);
  CHECK(std::abs(mean - 40.0 * 8.0 / 4.0) <= 3.0 * sigma_mean);
}

TEST_CASE("invalid specs are rejected") {
  PlantedSpec spec;
  spec.n = 10;
  spec.r = 2;
  spec.mu = 1.5;
  CHECK_THROWS_AS(build_planted_factors(spec), std::invalid_argument);
  spec.mu = 0.2;
  spec.r = 1;
  CHECK_THROWS_AS(build_planted_factors(spec), std::invalid_argument);  // cross mass impossible
  spec.r = 2;
  spec.sizes = {4, 4};
  CHECK_THROWS_AS(build_planted_factors(spec), std::invalid_argument);  // sizes sum != n
}

TEST_CASE("zero interaction samples an empty graph") {
  ScaledAssignment z{{0, 0, 1, 1}, {0.5, 0.5, 0.5, 0.5}, 2};
  const Graph g = sample_graph(z, MixingMatrix(2), 1);
  CHECK(g.total() == 0);
}

TEST_CASE("a single pair at rate four matches the Poisson mean") {
  ScaledAssignment z{{0, 1}, {1.0, 1.0}, 2};
  MixingMatrix theta(2);
  theta(0, 1) = theta(1, 0) = 4.0;
  double sum = 0.0;
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) sum += static_cast<double>(sample_graph(z, theta, s).entry(0, 1));
  CHECK(sum / draws == doctest::Approx(4.0).epsilon(0.025));
}

TEST_CASE("zero mixing yields no cross-community edges") {
  PlantedSpec spec;
  spec.n = 200;
  spec.r = 2;
  spec.mu = 0.0;
  spec.avg_degree = 20.0;
  const PlantedFactors f = build_planted_factors(spec);
  const Graph g = sample_graph(f.z, f.theta, 7);
  const auto [cross, total] = cross_and_total(g, f.partition);
  CHECK(cross == 0);
  CHECK(total > 0);
}

TEST_CASE("realized totals concentrate around the calibrated expectation") {
  PlantedSpec spec;
  spec.n = 500;
  spec.r = 5;
  spec.mu = 0.2;
  spec.avg_degree = 10.0;
  spec.seed = 11;
  const PlantedFactors f = build_planted_factors(spec);
  const double expected = 500.0 * 10.0;
  const double sigma = std::sqrt(2.0 * expected);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = sample_graph(f.z, f.theta, seed);
    CHECK(std::abs(static_cast<double>(g.total()) - expected) <= 5.0 * sigma);
  }
}

TEST_CASE("empirical mixing tracks the requested fraction") {
  PlantedSpec spec;
  spec.n = 1000;
  spec.r = 10;
  spec.mu = 0.3;
  spec.avg_degree = 15.0;
  spec.degrees = DegreeModel::power_law;
  spec.seed = 2;
  const PlantedFactors f = build_planted_factors(spec);
  double mu_hat = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = sample_graph(f.z, f.theta, seed);
    const auto [cross, total] = cross_and_total(g, f.partition);
    mu_hat += static_cast<double>(cross) / static_cast<double>(total);
  }
  mu_hat /= 10.0;
  CHECK(std::abs(mu_hat - 0.3) < 0.02);
}

TEST_CASE("sampling is deterministic per seed") {
  PlantedSpec spec;
  spec.n = 60;
  spec.r = 3;
  spec.mu = 0.25;
  spec.avg_degree = 8.0;
  spec.degrees = DegreeModel::power_law;
  const PlantedFactors f = build_planted_factors(spec);
  const Graph a = sample_graph(f.z, f.theta, 99);
  const Graph b = sample_graph(f.z, f.theta, 99);
  REQUIRE(a.total() == b.total());
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j) CHECK(a.entry(i, j) == b.entry(i, j));
}

TEST_CASE("power-law propensity spread stays within the configured support ratio") {
  PlantedSpec spec;
  spec.n = 300;
  spec.r = 3;
  spec.avg_degree = 10.0;
  spec.degrees = DegreeModel::power_law;
  spec.d_min = 10.0;
  spec.d_max = 50.0;
  const PlantedFactors f = build_planted_factors(spec);
  for (int k = 0; k < 3; ++k) {
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 300; ++i)
      if (f.z.community[i] == k) {
        lo = std::min(lo, f.z.weight[i]);
        hi = std::max(hi, f.z.weight[i]);
      }
    CHECK(hi / lo <= 5.0 + 1e-9);
  }
}

TEST_CASE("diagonal convention: sampled self-edges double on the diagonal") {
  ScaledAssignment z{{0}, {1.0}, 1};
  MixingMatrix theta(1);
  theta(0, 0) = 6.0;  // self rate 3
  int odd = 0;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const std::int64_t d = sample_graph(z, theta, seed).entry(0, 0);
    odd += d % 2 != 0;
    mean += static_cast<double>(d);
  }
  CHECK(odd == 0);
  CHECK(mean / 2000.0 == doctest::Approx(6.0).epsilon(0.1));
}
