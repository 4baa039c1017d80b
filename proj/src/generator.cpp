#include "frost/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace frost {

namespace {

std::vector<int> resolve_sizes(const PlantedSpec& spec) {
  if (!spec.sizes.empty()) {
    if (static_cast<int>(spec.sizes.size()) != spec.r)
      throw std::invalid_argument("planted spec: sizes list length != r");
    int sum = 0;
    for (int s : spec.sizes) {
      if (s < 0) throw std::invalid_argument("planted spec: negative community size");
      sum += s;
    }
    if (sum != spec.n) throw std::invalid_argument("planted spec: sizes do not sum to n");
    return spec.sizes;
  }
  std::vector<int> sizes(spec.r, spec.n / spec.r);
  for (int k = 0; k < spec.n % spec.r; ++k) sizes[k]++;
  return sizes;
}

// Inverse-CDF sample from the truncated continuous power law x^-gamma on
// [d_min, d_max].
double power_law_sample(double gamma, double lo, double hi, double u) {
  if (std::abs(gamma - 1.0) < 1e-12) return lo * std::pow(hi / lo, u);
  const double e = 1.0 - gamma;
  return std::pow(std::pow(lo, e) + u * (std::pow(hi, e) - std::pow(lo, e)), 1.0 / e);
}

}  // namespace

PlantedFactors build_planted_factors(const PlantedSpec& spec) {
  if (spec.n < 1 || spec.r < 1) throw std::invalid_argument("planted spec: need n >= 1, r >= 1");
  if (spec.mu < 0.0 || spec.mu > 1.0) throw std::invalid_argument("planted spec: mu outside [0,1]");
  if (spec.avg_degree <= 0.0) throw std::invalid_argument("planted spec: average degree must be > 0");
  if (spec.degrees == DegreeModel::power_law &&
      (spec.d_min <= 0.0 || spec.d_max < spec.d_min || spec.gamma <= 0.0))
    throw std::invalid_argument("planted spec: bad power-law parameters");

  const std::vector<int> sizes = resolve_sizes(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  PlantedFactors out;
  out.partition.r = spec.r;
  out.partition.assignment.resize(spec.n);
  out.z.r = spec.r;
  out.z.community.resize(spec.n);
  out.z.weight.resize(spec.n);

  int node = 0;
  for (int k = 0; k < spec.r; ++k) {
    for (int t = 0; t < sizes[k]; ++t, ++node) {
      out.partition.assignment[node] = k;
      out.z.community[node] = k;
      out.z.weight[node] = spec.degrees == DegreeModel::uniform
                               ? 1.0
                               : power_law_sample(spec.gamma, spec.d_min, spec.d_max, unif(rng));
    }
  }
  normalize_columns(out.z);

  // Column sums of Z; theta is calibrated against them so that
  // sum_ij rate(i,j) = n * avg_degree and the cross fraction is exactly mu.
  std::vector<double> colsum(spec.r, 0.0);
  for (int i = 0; i < spec.n; ++i) colsum[out.z.community[i]] += out.z.weight[i];

  const double total = static_cast<double>(spec.n) * spec.avg_degree;
  double cross_pairs = 0.0;
  double s_all = 0.0, s_sq = 0.0;
  for (double s : colsum) {
    s_all += s;
    s_sq += s * s;
  }
  cross_pairs = s_all * s_all - s_sq;

  out.theta = MixingMatrix(spec.r);
  if (spec.mu > 0.0) {
    if (cross_pairs <= 0.0)
      throw std::invalid_argument("planted spec: mu > 0 needs at least two nonempty communities");
    const double c = spec.mu * total / cross_pairs;
    for (int k = 0; k < spec.r; ++k)
      for (int l = 0; l < spec.r; ++l)
        if (k != l) out.theta(k, l) = c;
  }
  for (int k = 0; k < spec.r; ++k) {
    if (sizes[k] == 0) continue;
    const double share = static_cast<double>(sizes[k]) / spec.n;
    out.theta(k, k) = (1.0 - spec.mu) * total * share / (colsum[k] * colsum[k]);
  }
  return out;
}

Graph sample_graph(const ScaledAssignment& z, const MixingMatrix& theta, std::uint64_t seed) {
  const int n = z.node_count();
  std::vector<std::vector<int>> members(z.r);
  for (int i = 0; i < n; ++i)
    if (z.weight[i] > 0.0) members[z.community[i]].push_back(i);

  std::mt19937_64 rng(seed);
  using PoissonParam = std::poisson_distribution<std::int64_t>::param_type;
  std::poisson_distribution<std::int64_t> poisson;

  std::vector<Graph::Entry> entries;
  for (int k = 0; k < z.r; ++k) {
    for (int l = k; l < z.r; ++l) {
      const double t = theta(k, l);
      if (t <= 0.0) continue;
      if (k == l) {
        const auto& nodes = members[k];
        for (std::size_t a = 0; a < nodes.size(); ++a) {
          const int i = nodes[a];
          const std::int64_t self =
              poisson(rng, PoissonParam(0.5 * z.weight[i] * t * z.weight[i]));
          if (self > 0) entries.push_back({i, i, 2 * self});
          for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            const int j = nodes[b];
            const std::int64_t m = poisson(rng, PoissonParam(z.weight[i] * t * z.weight[j]));
            if (m > 0) entries.push_back({i, j, m});
          }
        }
      } else {
        for (int i : members[k]) {
          const double wi_t = z.weight[i] * t;
          for (int j : members[l]) {
            const std::int64_t m = poisson(rng, PoissonParam(wi_t * z.weight[j]));
            if (m > 0) entries.push_back({i, j, m});
          }
        }
      }
    }
  }
  return Graph::build(n, std::move(entries));
}

}  // namespace frost
