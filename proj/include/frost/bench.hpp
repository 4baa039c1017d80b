#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "frost/dcbm.hpp"
#include "frost/generator.hpp"
#include "frost/graph.hpp"
#include "frost/solver.hpp"
#include "frost/svca.hpp"

namespace frost {

enum class Method { frost, kn, klem };
enum class InitKind { svca, random };

std::string to_string(Method m);
std::string to_string(InitKind k);
Method method_from_string(const std::string& s);
InitKind init_from_string(const std::string& s);

struct DetectConfig {
  Method method = Method::frost;
  InitKind init = InitKind::svca;
  int r = 2;
  int runs = 10;
  std::uint64_t base_seed = 0;
  int workers = 1;
  /// Per-run wall-clock budget in seconds; 0 means an already-expired
  /// budget, unset means none.
  std::optional<double> timeout_s;
  FrostConfig frost;
  InferConfig infer;
  SvcaConfig svca;
};

struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;
  double objective = 0.0;
  std::string objective_kind;  ///< "frobenius_error" or "log_likelihood"
  double runtime_seconds = 0.0;
  int iterations = 0;  ///< outer iterations (frost) or sweeps (kn/klem)
  bool timed_out = false;
  std::optional<double> nmi;
  std::optional<double> ami;
  Partition partition;
};

struct DetectOutcome {
  Method method = Method::frost;
  InitKind init = InitKind::svca;
  std::vector<RunRecord> runs;
  int best_index = 0;  ///< lowest error (frost) / highest likelihood (kn, klem)

  const RunRecord& best() const { return runs[best_index]; }
};

/// Runs `cfg.runs` independent pipelines (seed = base_seed + index) across a
/// worker pool and keeps them ordered by run index. With SVCA init the
/// dominant subspace is computed once and shared; each run still performs
/// its own SVCA selection. Scores against `truth` when provided.
DetectOutcome detect(const Graph& g, const DetectConfig& cfg, const Labels* truth = nullptr);

/// Writes out_dir/{method}-{init}/run-{k}.json, best.labels and summary.csv.
void write_detect_outputs(const DetectOutcome& outcome, const std::filesystem::path& out_dir);

struct BenchOptions {
  std::vector<Method> methods;
  InitKind init = InitKind::svca;
  int runs = 3;
  std::uint64_t base_seed = 0;
  std::optional<double> timeout_s;
  FrostConfig frost;
  InferConfig infer;
  SvcaConfig svca;
};

struct BenchRow {
  int n = 0;
  std::int64_t edges = 0;
  std::string method;
  std::string init;
  int completed = 0;
  int timed_out = 0;
  double mean_runtime_s = 0.0;
  double mean_iterations = 0.0;
  double mean_runtime_per_iter_s = 0.0;
  double mean_ami = 0.0;
};

/// Generates one planted graph per spec and measures every method on it.
/// Means are over completed (non-timed-out) runs; AMI is against the planted
/// partition.
std::vector<BenchRow> bench_scaling(const std::vector<PlantedSpec>& specs,
                                    const BenchOptions& opts);

void write_bench_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path);

}  // namespace frost
