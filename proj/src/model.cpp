#include "frost/model.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace frost {

double MixingMatrix::max_asymmetry() const {
  double m = 0.0;
  for (int k = 0; k < r; ++k)
    for (int l = k + 1; l < r; ++l) m = std::max(m, std::abs((*this)(k, l) - (*this)(l, k)));
  return m;
}

double MixingMatrix::frobenius_norm_sq() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

std::vector<double> column_norms_sq(const ScaledAssignment& z) {
  std::vector<double> s(z.r, 0.0);
  for (int i = 0; i < z.node_count(); ++i)
    if (z.weight[i] != 0.0) s[z.community[i]] += z.weight[i] * z.weight[i];
  return s;
}

void normalize_columns(ScaledAssignment& z) {
  std::vector<double> s = column_norms_sq(z);
  for (double& v : s) v = v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;
  for (int i = 0; i < z.node_count(); ++i)
    if (z.weight[i] != 0.0) z.weight[i] *= s[z.community[i]];
}

bool is_column_normalized(const ScaledAssignment& z, double tol) {
  for (double s : column_norms_sq(z))
    if (s != 0.0 && std::abs(s - 1.0) > tol) return false;
  return true;
}

double reconstruct_entry(const ScaledAssignment& z, const MixingMatrix& theta, int i, int j) {
  if (z.weight[i] == 0.0 || z.weight[j] == 0.0) return 0.0;
  return z.weight[i] * theta(z.community[i], z.community[j]) * z.weight[j];
}

double frobenius_error(const Graph& g, const ScaledAssignment& z, const MixingMatrix& theta) {
  const int n = g.node_count();
  // sum_ij A(i,j)^2 and the cross term <A, Z theta Z^T> over nonzeros.
  double norm_a = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    auto mu = g.multiplicities(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      double a = static_cast<double>(mu[k]);
      norm_a += a * a;
      cross += a * reconstruct_entry(z, theta, i, nb[k]);
    }
  }
  if (is_column_normalized(z)) {
    // With Z^T Z = I on nonempty communities, ||Z theta Z^T||_F^2 collapses
    // to the theta entries of nonempty communities.
    std::vector<double> s = column_norms_sq(z);
    double norm_rec = 0.0;
    for (int k = 0; k < z.r; ++k)
      for (int l = 0; l < z.r; ++l)
        if (s[k] != 0.0 && s[l] != 0.0) norm_rec += theta(k, l) * theta(k, l);
    return norm_a - 2.0 * cross + norm_rec;
  }
  // Direct evaluation: ||Z theta Z^T||_F^2 = sum_kl theta(k,l)^2 s_k s_l for
  // the disjoint-support Z.
  std::vector<double> s = column_norms_sq(z);
  double norm_rec = 0.0;
  for (int k = 0; k < z.r; ++k)
    for (int l = 0; l < z.r; ++l) norm_rec += theta(k, l) * theta(k, l) * s[k] * s[l];
  return norm_a - 2.0 * cross + norm_rec;
}

Partition to_partition(const ScaledAssignment& z, ZeroRowPolicy policy, std::uint64_t seed) {
  Partition p;
  p.r = z.r;
  p.assignment = z.community;
  std::vector<int> zero_rows;
  for (int i = 0; i < z.node_count(); ++i)
    if (z.weight[i] == 0.0) zero_rows.push_back(i);
  if (zero_rows.empty()) return p;

  switch (policy) {
    case ZeroRowPolicy::random: {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> pick(0, z.r - 1);
      for (int i : zero_rows) p.assignment[i] = pick(rng);
      break;
    }
    case ZeroRowPolicy::error_out: {
      std::ostringstream msg;
      msg << "to_partition: unassigned nodes:";
      for (int i : zero_rows) msg << ' ' << i;
      throw std::runtime_error(msg.str());
    }
    case ZeroRowPolicy::singleton: {
      for (int i : zero_rows) p.assignment[i] = p.r++;
      break;
    }
  }
  return p;
}

void save_partition(const Partition& p, const std::filesystem::path& path) {
  save_labels(p.assignment, path);
}

Partition load_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open partition: " + path.string());
  std::vector<std::pair<int, int>> pairs;
  int node = 0, community = 0;
  while (in >> node >> community) pairs.emplace_back(node, community);
  Partition p;
  int n = 0;
  for (auto& [i, c] : pairs) n = std::max(n, i + 1);
  p.assignment.assign(n, 0);
  for (auto& [i, c] : pairs) {
    p.assignment[i] = c;
    p.r = std::max(p.r, c + 1);
  }
  return p;
}

void save_factors(const ScaledAssignment& z, const MixingMatrix& theta,
                  const std::filesystem::path& path) {
  nlohmann::json j;
  j["r"] = z.r;
  j["v"] = z.community;
  j["w"] = z.weight;
  j["theta"] = theta.values;
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write factors: " + path.string());
  outf << j.dump(2) << "\n";
}

}  // namespace frost
