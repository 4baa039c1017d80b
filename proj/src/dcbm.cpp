#include "frost/dcbm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace frost {

namespace {

inline double xlogx(std::int64_t x) {
  return x > 0 ? static_cast<double>(x) * std::log(static_cast<double>(x)) : 0.0;
}

inline double improvement_eps(double ll) { return 1e-9 * (1.0 + std::abs(ll)); }

// Edge mass from node i into each community (self-loops excluded), reused
// across all r candidate targets of the node.
struct NeighborMass {
  std::vector<std::int64_t> cnt;
  std::vector<int> touched;

  void gather(const Graph& g, const Partition& p, int i) {
    for (int c : touched) cnt[c] = 0;
    touched.clear();
    auto nb = g.neighbors(i);
    auto mu = g.multiplicities(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      const int j = nb[e];
      if (j == i) continue;
      const int c = p.assignment[j];
      if (cnt[c] == 0) touched.push_back(c);
      cnt[c] += mu[e];
    }
  }
};

double delta_for_move(const NeighborMass& mass, const BlockStats& stats, const Graph& g,
                      const Partition& p, int i, int to) {
  const int f = p.assignment[i];
  const std::int64_t a_ii = g.self_mult(i);
  const std::int64_t d_i = g.degree(i);
  const std::int64_t cf = mass.cnt[f];
  const std::int64_t ct = mass.cnt[to];

  // L = sum_kl m log m - 2 sum_k kappa log kappa; only entries touching f or
  // t change.
  double delta = 0.0;
  delta += xlogx(stats.at(f, f) - 2 * cf - a_ii) - xlogx(stats.at(f, f));
  delta += xlogx(stats.at(to, to) + 2 * ct + a_ii) - xlogx(stats.at(to, to));
  delta += 2.0 * (xlogx(stats.at(f, to) + cf - ct) - xlogx(stats.at(f, to)));
  for (int c : mass.touched) {
    if (c == f || c == to) continue;
    delta += 2.0 * (xlogx(stats.at(f, c) - mass.cnt[c]) - xlogx(stats.at(f, c)));
    delta += 2.0 * (xlogx(stats.at(to, c) + mass.cnt[c]) - xlogx(stats.at(to, c)));
  }
  delta -= 2.0 * (xlogx(stats.kappa[f] - d_i) - xlogx(stats.kappa[f]));
  delta -= 2.0 * (xlogx(stats.kappa[to] + d_i) - xlogx(stats.kappa[to]));
  return delta;
}

// Best target for node i against the current stats; r >= 2 required.
MoveDelta best_move(const Graph& g, const Partition& p, const BlockStats& stats,
                    NeighborMass& mass, int i) {
  mass.gather(g, p, i);
  MoveDelta best{i, p.assignment[i], -1, 0.0};
  for (int to = 0; to < p.r; ++to) {
    if (to == p.assignment[i]) continue;
    const double d = delta_for_move(mass, stats, g, p, i, to);
    if (best.to < 0 || d > best.delta_ll) {
      best.to = to;
      best.delta_ll = d;
    }
  }
  return best;
}

}  // namespace

BlockStats block_stats(const Graph& g, const Partition& p) {
  if (p.node_count() != g.node_count())
    throw std::invalid_argument("block_stats: partition size mismatch");
  BlockStats stats;
  stats.r = p.r;
  stats.m.assign(static_cast<std::size_t>(p.r) * p.r, 0);
  stats.kappa.assign(p.r, 0);
  for (int i = 0; i < g.node_count(); ++i) {
    const int ki = p.assignment[i];
    stats.kappa[ki] += g.degree(i);
    auto nb = g.neighbors(i);
    auto mu = g.multiplicities(i);
    for (std::size_t e = 0; e < nb.size(); ++e) stats.at(ki, p.assignment[nb[e]]) += mu[e];
  }
  return stats;
}

double log_likelihood(const BlockStats& stats) {
  double ll = 0.0;
  for (int k = 0; k < stats.r; ++k) {
    if (stats.kappa[k] == 0) continue;
    const double log_kk = std::log(static_cast<double>(stats.kappa[k]));
    for (int l = 0; l < stats.r; ++l) {
      const std::int64_t m = stats.at(k, l);
      if (m == 0) continue;
      ll += static_cast<double>(m) *
            (std::log(static_cast<double>(m)) - log_kk -
             std::log(static_cast<double>(stats.kappa[l])));
    }
  }
  return ll;
}

MoveDelta move_delta(const Graph& g, const Partition& p, const BlockStats& stats, int i, int to) {
  if (to == p.assignment[i]) throw std::invalid_argument("move_delta: node already in target");
  NeighborMass mass;
  mass.cnt.assign(p.r, 0);
  mass.gather(g, p, i);
  return {i, p.assignment[i], to, delta_for_move(mass, stats, g, p, i, to)};
}

void apply_move(const Graph& g, Partition& p, BlockStats& stats, int i, int to) {
  const int f = p.assignment[i];
  if (f == to) return;
  const std::int64_t a_ii = g.self_mult(i);
  auto nb = g.neighbors(i);
  auto mu = g.multiplicities(i);
  for (std::size_t e = 0; e < nb.size(); ++e) {
    const int j = nb[e];
    if (j == i) continue;
    const int c = p.assignment[j];
    stats.at(f, c) -= mu[e];
    stats.at(c, f) -= mu[e];
    stats.at(to, c) += mu[e];
    stats.at(c, to) += mu[e];
  }
  stats.at(f, f) -= a_ii;
  stats.at(to, to) += a_ii;
  stats.kappa[f] -= g.degree(i);
  stats.kappa[to] += g.degree(i);
  p.assignment[i] = to;
}

InferResult kn_infer(const Graph& g, int r, Partition init, const InferConfig& cfg) {
  if (r < 1) throw std::invalid_argument("kn_infer: community count must be >= 1");
  Partition p = std::move(init);
  p.r = r;
  for (int c : p.assignment)
    if (c < 0 || c >= r) throw std::invalid_argument("kn_infer: init label out of range");

  BlockStats stats = block_stats(g, p);
  double ll = log_likelihood(stats);
  InferResult res;
  NeighborMass mass;
  mass.cnt.assign(r, 0);

  struct Step {
    int node, from;
  };
  std::vector<Step> steps;
  steps.reserve(g.node_count());

  for (int pass = 0; pass < cfg.max_sweeps; ++pass) {
    if (cfg.deadline && std::chrono::steady_clock::now() >= *cfg.deadline) {
      res.timed_out = true;
      break;
    }
    res.sweeps = pass + 1;
    if (r == 1) break;

    const double ll_start = ll;
    double best_ll = ll;
    std::size_t best_prefix = 0;
    steps.clear();
    for (int i = 0; i < g.node_count(); ++i) {
      const MoveDelta mv = best_move(g, p, stats, mass, i);
      steps.push_back({i, p.assignment[i]});
      apply_move(g, p, stats, i, mv.to);
      ll += mv.delta_ll;
      if (ll > best_ll) {
        best_ll = ll;
        best_prefix = steps.size();
      }
    }
    // Rewind to the best prefix of the pass.
    for (std::size_t k = steps.size(); k > best_prefix; --k)
      apply_move(g, p, stats, steps[k - 1].node, steps[k - 1].from);
    ll = log_likelihood(stats);

    if (ll <= ll_start + improvement_eps(ll_start)) break;
  }

  res.partition = std::move(p);
  res.log_likelihood = ll;
  return res;
}

InferResult klem_infer(const Graph& g, int r, Partition init, const InferConfig& cfg) {
  if (r < 1) throw std::invalid_argument("klem_infer: community count must be >= 1");
  Partition p = std::move(init);
  p.r = r;
  for (int c : p.assignment)
    if (c < 0 || c >= r) throw std::invalid_argument("klem_infer: init label out of range");

  BlockStats stats = block_stats(g, p);
  double ll = log_likelihood(stats);
  InferResult res;
  NeighborMass mass;
  mass.cnt.assign(r, 0);

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    if (cfg.deadline && std::chrono::steady_clock::now() >= *cfg.deadline) {
      res.timed_out = true;
      break;
    }
    if (r == 1) {
      res.sweeps = 1;
      break;
    }

    // Every node's best move is evaluated against the same frozen state.
    res.sweeps = sweep + 1;
    std::vector<MoveDelta> improving;
    for (int i = 0; i < g.node_count(); ++i) {
      const MoveDelta mv = best_move(g, p, stats, mass, i);
      if (mv.delta_ll > improvement_eps(ll)) improving.push_back(mv);
    }
    if (improving.empty()) break;

    for (const MoveDelta& mv : improving) p.assignment[mv.node] = mv.to;
    stats = block_stats(g, p);
    const double ll_batch = log_likelihood(stats);
    if (ll_batch < ll) {
      // Conflicting simultaneous moves; keep only the single best one.
      for (const MoveDelta& mv : improving) p.assignment[mv.node] = mv.from;
      const MoveDelta* best = &improving.front();
      for (const MoveDelta& mv : improving)
        if (mv.delta_ll > best->delta_ll) best = &mv;
      p.assignment[best->node] = best->to;
      stats = block_stats(g, p);
      ll = log_likelihood(stats);
    } else {
      ll = ll_batch;
    }
  }

  res.partition = std::move(p);
  res.log_likelihood = ll;
  return res;
}

Partition random_partition(int n, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, r - 1);
  Partition p;
  p.r = r;
  p.assignment.resize(n);
  for (int i = 0; i < n; ++i) p.assignment[i] = pick(rng);
  return p;
}

}  // namespace frost
