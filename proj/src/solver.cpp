#include "frost/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace frost {

MixingMatrix update_theta(const Graph& g, const ScaledAssignment& z) {
  MixingMatrix theta(z.r);
  for (int i = 0; i < g.node_count(); ++i) {
    const double wi = z.weight[i];
    if (wi == 0.0) continue;
    const int ki = z.community[i];
    auto nb = g.neighbors(i);
    auto mu = g.multiplicities(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      const int j = nb[e];
      if (z.weight[j] == 0.0) continue;
      theta(ki, z.community[j]) += static_cast<double>(mu[e]) * wi * z.weight[j];
    }
  }
  return theta;
}

QuarticCoeffs quartic_coeffs(const Graph& g, const ScaledAssignment& z, const MixingMatrix& theta,
                             int i, int k) {
  QuarticCoeffs q;
  const double tkk = theta(k, k);
  q.a = tkk * tkk;
  double sum_sq = 0.0;
  for (int j = 0; j < z.node_count(); ++j) {
    if (j == i || z.weight[j] == 0.0) continue;
    const double t = z.weight[j] * theta(z.community[j], k);
    sum_sq += t * t;
  }
  q.b = 2.0 * (sum_sq - tkk * static_cast<double>(g.self_mult(i)));
  double cross = 0.0;
  auto nb = g.neighbors(i);
  auto mu = g.multiplicities(i);
  for (std::size_t e = 0; e < nb.size(); ++e) {
    const int j = nb[e];
    if (j == i || z.weight[j] == 0.0) continue;
    cross += static_cast<double>(mu[e]) * z.weight[j] * theta(z.community[j], k);
  }
  q.c = -4.0 * cross;
  return q;
}

namespace {

// Real roots of 4a z^3 + 2b z + c with a > 0, via the depressed cubic
// z^3 + p z + q0. Trigonometric branch for the three-real-root case, one
// Newton polish per root.
int derivative_roots(double a, double b, double c, double out[3]) {
  const double p = b / (2.0 * a);
  const double q0 = c / (4.0 * a);
  if (p == 0.0 && q0 == 0.0) {
    out[0] = 0.0;
    return 1;
  }
  int count = 0;
  const double disc = 0.25 * q0 * q0 + p * p * p / 27.0;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    out[count++] = std::cbrt(-0.5 * q0 + s) + std::cbrt(-0.5 * q0 - s);
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q0 / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      out[count++] = m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
  }
  for (int k = 0; k < count; ++k) {
    const double z = out[k];
    const double g = (4.0 * a * z * z + 2.0 * b) * z + c;
    const double gp = 12.0 * a * z * z + 2.0 * b;
    if (std::abs(gp) > 1e-300) out[k] = z - g / gp;
  }
  return count;
}

}  // namespace

QuarticMinimum minimize_quartic(const QuarticCoeffs& q, double default_value) {
  QuarticMinimum fallback{default_value, q.eval(default_value), true};

  double roots[3];
  int count = 0;
  if (q.a > 0.0) {
    if (q.b == 0.0 && q.c == 0.0) return fallback;
    count = derivative_roots(q.a, q.b, q.c, roots);
  } else {
    // f = b z^2 + c z: a single stationary point when b > 0, otherwise the
    // ray is flat or unbounded below.
    if (q.b > 0.0) {
      roots[count++] = -q.c / (2.0 * q.b);
    } else {
      return fallback;
    }
  }

  double cands[4] = {0.0};
  int n_cand = 1;
  for (int k = 0; k < count; ++k)
    if (roots[k] >= -1e-12) cands[n_cand++] = std::max(roots[k], 0.0);
  if (n_cand == 1) return fallback;  // no nonnegative stationary point

  std::sort(cands, cands + n_cand);
  QuarticMinimum best{cands[0], q.eval(cands[0]), false};
  for (int k = 1; k < n_cand; ++k) {
    const double v = q.eval(cands[k]);
    if (v < best.value) best = {cands[k], v, false};
  }
  return best;
}

RowOptimizer::RowOptimizer(const Graph& g, const ScaledAssignment& z, const MixingMatrix& theta) {
  (void)g;
  recompute(z, theta);
}

void RowOptimizer::recompute(const ScaledAssignment& z, const MixingMatrix& theta) {
  totals_.assign(z.r, 0.0);
  for (int j = 0; j < z.node_count(); ++j) {
    const double wj = z.weight[j];
    if (wj == 0.0) continue;
    const int vj = z.community[j];
    for (int k = 0; k < z.r; ++k) {
      const double t = wj * theta(vj, k);
      totals_[k] += t * t;
    }
  }
}

void RowOptimizer::remove_row(const ScaledAssignment& z, const MixingMatrix& theta, int i) {
  const double wi = z.weight[i];
  if (wi == 0.0) return;
  const int vi = z.community[i];
  for (int k = 0; k < z.r; ++k) {
    const double t = wi * theta(vi, k);
    totals_[k] -= t * t;
  }
}

void RowOptimizer::add_row(const ScaledAssignment& z, const MixingMatrix& theta, int i) {
  const double wi = z.weight[i];
  if (wi == 0.0) return;
  const int vi = z.community[i];
  for (int k = 0; k < z.r; ++k) {
    const double t = wi * theta(vi, k);
    totals_[k] += t * t;
  }
}

QuarticCoeffs RowOptimizer::coeffs_excluding(const Graph& g, const ScaledAssignment& z,
                                             const MixingMatrix& theta, int i, int k) const {
  QuarticCoeffs q;
  const double tkk = theta(k, k);
  q.a = tkk * tkk;
  q.b = 2.0 * (std::max(totals_[k], 0.0) - tkk * static_cast<double>(g.self_mult(i)));
  double cross = 0.0;
  auto nb = g.neighbors(i);
  auto mu = g.multiplicities(i);
  for (std::size_t e = 0; e < nb.size(); ++e) {
    const int j = nb[e];
    if (j == i || z.weight[j] == 0.0) continue;
    cross += static_cast<double>(mu[e]) * z.weight[j] * theta(z.community[j], k);
  }
  q.c = -4.0 * cross;
  return q;
}

RowUpdate update_row(const Graph& g, ScaledAssignment& z, const MixingMatrix& theta,
                     RowOptimizer& opt, int i, double default_value) {
  opt.remove_row(z, theta, i);

  // Aggregate edge terms by neighbor community once, then c for community k
  // is a dot product with theta's column.
  thread_local std::vector<double> edge_sum;
  thread_local std::vector<int> touched;
  edge_sum.assign(z.r, 0.0);
  touched.clear();
  double self_a = static_cast<double>(g.self_mult(i));
  auto nb = g.neighbors(i);
  auto mu = g.multiplicities(i);
  for (std::size_t e = 0; e < nb.size(); ++e) {
    const int j = nb[e];
    if (j == i || z.weight[j] == 0.0) continue;
    const int l = z.community[j];
    if (edge_sum[l] == 0.0) touched.push_back(l);
    edge_sum[l] += static_cast<double>(mu[e]) * z.weight[j];
  }

  const QuarticCoeffs old_coeffs = opt.coeffs_excluding(g, z, theta, i, z.community[i]);
  const double old_value = old_coeffs.eval(z.weight[i]);

  RowUpdate best;
  bool first = true;
  for (int k = 0; k < z.r; ++k) {
    QuarticCoeffs q;
    const double tkk = theta(k, k);
    q.a = tkk * tkk;
    q.b = 2.0 * (std::max(opt.total(k), 0.0) - tkk * self_a);
    double cross = 0.0;
    for (int l : touched) cross += edge_sum[l] * theta(l, k);
    q.c = -4.0 * cross;
    const QuarticMinimum qm = minimize_quartic(q, default_value);
    if (first || qm.value < best.error_change) {
      best = {k, qm.z, qm.value, qm.used_default};
      first = false;
    }
  }
  // error_change currently holds the new contribution; convert to a delta.
  best.error_change -= old_value;

  z.community[i] = best.community;
  z.weight[i] = best.weight;
  opt.add_row(z, theta, i);
  return best;
}

FrostResult frost_solve(const Graph& g, ScaledAssignment z, MixingMatrix theta,
                        const FrostConfig& cfg) {
  const int n = g.node_count();
  if (z.r < 1) throw std::invalid_argument("frost_solve: community count must be >= 1");
  if (z.r > n) throw std::invalid_argument("frost_solve: more communities than nodes");
  if (z.node_count() != n || theta.r != z.r)
    throw std::invalid_argument("frost_solve: factor dimensions do not match the graph");

  const double default_value =
      cfg.default_weight >= 0.0 ? cfg.default_weight : std::sqrt(static_cast<double>(z.r) / n);

  FrostResult res;
  res.trace.push_back({0, frobenius_error(g, z, theta), 0});

  RowOptimizer opt(g, z, theta);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(cfg.seed);

  for (int iter = 1; iter <= cfg.max_outer_iterations; ++iter) {
    if (cfg.deadline && std::chrono::steady_clock::now() >= *cfg.deadline) {
      res.timed_out = true;
      break;
    }
    if (cfg.node_order == NodeOrder::shuffled) std::shuffle(order.begin(), order.end(), rng);

    int defaults = 0;
    for (int i : order) defaults += update_row(g, z, theta, opt, i, default_value).used_default;

    normalize_columns(z);
    theta = update_theta(g, z);
    opt.recompute(z, theta);

    const double err = frobenius_error(g, z, theta);
    res.trace.push_back({iter, err, defaults});
    res.iterations = iter;

    if (err <= cfg.abs_tol) break;
    const double prev = res.trace[static_cast<std::size_t>(iter) - 1].frobenius_error;
    const double decrease = prev - err;
    if (decrease >= 0.0 && decrease <= cfg.rel_tol * prev) break;
  }

  res.z = std::move(z);
  res.theta = std::move(theta);
  return res;
}

std::pair<ScaledAssignment, MixingMatrix> random_init(const Graph& g, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, r - 1);
  ScaledAssignment z;
  z.r = r;
  z.community.resize(g.node_count());
  z.weight.assign(g.node_count(), 1.0);
  for (int i = 0; i < g.node_count(); ++i) z.community[i] = pick(rng);
  normalize_columns(z);
  return {z, update_theta(g, z)};
}

void write_trace_csv(const std::vector<FrostTracePoint>& trace,
                     const std::filesystem::path& path) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write trace: " + path.string());
  outf << "iteration,frobenius_error,defaults_fired\n";
  for (const FrostTracePoint& t : trace)
    outf << t.iteration << ',' << t.frobenius_error << ',' << t.defaults_fired << "\n";
}

}  // namespace frost
