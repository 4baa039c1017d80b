#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "frost/dcbm.hpp"
#include "frost/metrics.hpp"
#include "oracles.hpp"

using namespace frost;

namespace {

// Two disconnected triangles.
Graph two_triangles() {
  return Graph::build(6, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}});
}

double recompute_ll(const Graph& g, const Partition& p) {
  return log_likelihood(block_stats(g, p));
}

}  // namespace

TEST_CASE("block stats on hand instances") {
  SUBCASE("single edge, one community") {
    const Graph g = Graph::build(2, {{0, 1, 1}});
    const BlockStats s = block_stats(g, {{0, 0}, 1});
    CHECK(s.at(0, 0) == 2);
    CHECK(s.kappa[0] == 2);
  }
  SUBCASE("triangle split 0,1 | 2") {
    const Graph g = Graph::build(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
    const BlockStats s = block_stats(g, {{0, 0, 1}, 2});
    CHECK(s.at(0, 0) == 2);
    CHECK(s.at(0, 1) == 2);
    CHECK(s.at(1, 0) == 2);
    CHECK(s.at(1, 1) == 0);
    CHECK(s.kappa[0] == 4);
    CHECK(s.kappa[1] == 2);
  }
  SUBCASE("five-node instance with the printed odd diagonal") {
    const Graph g = oracle::example1();
    const BlockStats s = block_stats(g, {{0, 0, 1, 1, 1}, 2});
    CHECK(s.at(0, 0) == 4);
    CHECK(s.at(1, 1) == 5);
    CHECK(s.at(0, 1) == 0);
    CHECK(s.kappa[0] == 4);
    CHECK(s.kappa[1] == 5);
  }
  SUBCASE("mass conservation") {
    const Graph g = oracle::random_multigraph(12, 3);
    const Partition p = random_partition(12, 4, 5);
    const BlockStats s = block_stats(g, p);
    std::int64_t sum = 0;
    for (std::int64_t v : s.m) sum += v;
    CHECK(sum == g.total());
  }
}

TEST_CASE("log-likelihood conventions") {
  SUBCASE("everything in one community collapses to -2m log 2m") {
    const Graph g = two_triangles();
    const BlockStats s = block_stats(g, {{0, 0, 0, 0, 0, 0}, 1});
    const double total = static_cast<double>(g.total());
    CHECK(log_likelihood(s) == doctest::Approx(-total * std::log(total)).epsilon(1e-12));
  }
  SUBCASE("correct split beats the merge") {
    const Graph g = two_triangles();
    const double split = recompute_ll(g, {{0, 0, 0, 1, 1, 1}, 2});
    const double merged = recompute_ll(g, {{0, 0, 0, 0, 0, 0}, 2});
    CHECK(split > merged);
  }
  SUBCASE("zero off-diagonal blocks contribute nothing, empty community allowed") {
    const Graph g = two_triangles();
    const BlockStats s = block_stats(g, {{0, 0, 0, 1, 1, 1}, 3});  // community 2 empty
    CHECK(s.kappa[2] == 0);
    CHECK(std::isfinite(log_likelihood(s)));
    CHECK(log_likelihood(s) == doctest::Approx(recompute_ll(g, {{0, 0, 0, 1, 1, 1}, 2})));
  }
  SUBCASE("matches the dense oracle") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Graph g = oracle::random_multigraph(9, seed);
      const Partition p = random_partition(9, 3, seed + 1);
      const double expect = oracle::dense_dcbm_ll(oracle::dense_adjacency(g), p.assignment, p.r);
      CHECK(recompute_ll(g, p) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("move_delta matches full recomputation") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = oracle::random_multigraph(6, seed, 0.45);
    Partition p = random_partition(6, 3, seed * 3 + 1);
    BlockStats stats = block_stats(g, p);
    const double before = log_likelihood(stats);
    for (int i = 0; i < 6; ++i) {
      for (int to = 0; to < 3; ++to) {
        if (to == p.assignment[i]) continue;
        const MoveDelta mv = move_delta(g, p, stats, i, to);
        Partition q = p;
        q.assignment[i] = to;
        const double expect = recompute_ll(g, q) - before;
        CHECK(mv.delta_ll ==
              doctest::Approx(expect).epsilon(1e-10).scale(std::max(1.0, std::abs(before))));
        ++checked;
      }
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("moving an isolated node changes nothing") {
  Graph g = Graph::build(4, {{0, 1, 1}, {1, 2, 1}});  // node 3 isolated
  Partition p{{0, 0, 1, 0}, 2};
  const BlockStats stats = block_stats(g, p);
  const MoveDelta mv = move_delta(g, p, stats, 3, 1);
  CHECK(mv.delta_ll == doctest::Approx(0.0));
}

TEST_CASE("move_delta rejects a no-op move") {
  const Graph g = two_triangles();
  Partition p{{0, 0, 0, 1, 1, 1}, 2};
  const BlockStats stats = block_stats(g, p);
  CHECK_THROWS_AS(move_delta(g, p, stats, 0, 0), std::invalid_argument);
}

TEST_CASE("apply then revert restores the stats exactly") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = oracle::random_multigraph(8, seed);
    Partition p = random_partition(8, 3, seed);
    BlockStats stats = block_stats(g, p);
    const BlockStats snapshot = stats;
    const int from = p.assignment[2];
    apply_move(g, p, stats, 2, (from + 1) % 3);
    apply_move(g, p, stats, 2, from);
    CHECK(stats.m == snapshot.m);
    CHECK(stats.kappa == snapshot.kappa);
    CHECK(p.assignment[2] == from);
  }
}

TEST_CASE("incremental stats stay consistent across applied moves") {
  const Graph g = oracle::random_multigraph(10, 2);
  Partition p = random_partition(10, 3, 9);
  BlockStats stats = block_stats(g, p);
  double ll = log_likelihood(stats);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> node(0, 9), comm(0, 2);
  for (int step = 0; step < 200; ++step) {
    const int i = node(rng);
    int to = comm(rng);
    if (to == p.assignment[i]) to = (to + 1) % 3;
    const MoveDelta mv = move_delta(g, p, stats, i, to);
    apply_move(g, p, stats, i, to);
    ll += mv.delta_ll;
    std::int64_t sum = 0;
    for (std::int64_t v : stats.m) sum += v;
    CHECK(sum == g.total());
    CHECK(ll == doctest::Approx(recompute_ll(g, p)).epsilon(1e-9));
  }
}

TEST_CASE("kn pass keeps a locally optimal planted split") {
  const Graph g = two_triangles();
  const Partition planted{{0, 0, 0, 1, 1, 1}, 2};
  const InferResult res = kn_infer(g, 2, planted, {.seed = 3});
  CHECK(res.sweeps == 1);
  CHECK(res.partition.assignment == planted.assignment);
  CHECK(res.log_likelihood == doctest::Approx(recompute_ll(g, planted)));
}

TEST_CASE("kn restores a flipped node") {
  const Graph g = two_triangles();
  Partition flipped{{1, 0, 0, 1, 1, 1}, 2};
  const InferResult res = kn_infer(g, 2, flipped, {.seed = 11});
  const Partition planted{{0, 0, 0, 1, 1, 1}, 2};
  CHECK(res.log_likelihood == doctest::Approx(recompute_ll(g, planted)).epsilon(1e-12));
  CHECK(ami_max(res.partition.assignment, planted.assignment) == doctest::Approx(1.0));
}

TEST_CASE("klem leaves a local optimum unchanged") {
  const Graph g = two_triangles();
  const Partition planted{{0, 0, 0, 1, 1, 1}, 2};
  const InferResult res = klem_infer(g, 2, planted, {});
  CHECK(res.partition.assignment == planted.assignment);
  CHECK(res.sweeps == 1);
}

TEST_CASE("klem repairs a flipped node") {
  const Graph g = two_triangles();
  const InferResult res = klem_infer(g, 2, {{1, 0, 0, 1, 1, 1}, 2}, {});
  const Partition planted{{0, 0, 0, 1, 1, 1}, 2};
  CHECK(res.log_likelihood == doctest::Approx(recompute_ll(g, planted)).epsilon(1e-12));
}

TEST_CASE("both heuristics reach the exhaustive optimum on a small graph") {
  const Graph g = oracle::random_multigraph(7, 31, 0.45);
  const oracle::Dense a = oracle::dense_adjacency(g);
  double best_ll = -std::numeric_limits<double>::infinity();
  oracle::for_each_bipartition(7, [&](const std::vector<int>& labels) {
    best_ll = std::max(best_ll, oracle::dense_dcbm_ll(a, labels, 2));
  });
  double kn_best = -std::numeric_limits<double>::infinity();
  double klem_best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    kn_best = std::max(kn_best,
                       kn_infer(g, 2, random_partition(7, 2, seed), {.seed = seed}).log_likelihood);
    klem_best = std::max(
        klem_best, klem_infer(g, 2, random_partition(7, 2, seed), {.seed = seed}).log_likelihood);
  }
  CHECK(kn_best == doctest::Approx(best_ll).epsilon(1e-9));
  CHECK(klem_best == doctest::Approx(best_ll).epsilon(1e-9));
}

TEST_CASE("objectives never fall below the initial value") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = oracle::random_multigraph(12, seed, 0.3);
    const Partition init = random_partition(12, 3, seed + 5);
    const double start = recompute_ll(g, init);
    CHECK(kn_infer(g, 3, init, {.seed = seed}).log_likelihood >= start - 1e-9);
    CHECK(klem_infer(g, 3, init, {.seed = seed}).log_likelihood >= start - 1e-9);
  }
}

TEST_CASE("inference is deterministic under a fixed seed") {
  const Graph g = oracle::random_multigraph(15, 8, 0.25);
  const Partition init = random_partition(15, 4, 2);
  const InferResult a = kn_infer(g, 4, init, {.seed = 42});
  const InferResult b = kn_infer(g, 4, init, {.seed = 42});
  CHECK(a.partition.assignment == b.partition.assignment);
  CHECK(a.log_likelihood == b.log_likelihood);
  const InferResult c = klem_infer(g, 4, init, {.seed = 42});
  const InferResult d = klem_infer(g, 4, init, {.seed = 42});
  CHECK(c.partition.assignment == d.partition.assignment);
}

TEST_CASE("moves that empty a community are legal") {
  const Graph g = Graph::build(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  Partition p{{0, 0, 1}, 2};
  BlockStats stats = block_stats(g, p);
  const MoveDelta mv = move_delta(g, p, stats, 2, 0);
  apply_move(g, p, stats, 2, 0);
  CHECK(stats.kappa[1] == 0);
  CHECK(log_likelihood(stats) == doctest::Approx(recompute_ll(g, p)));
  CHECK(std::isfinite(mv.delta_ll));
}
