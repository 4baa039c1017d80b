#include "frost/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "frost/metrics.hpp"

namespace frost {

std::string to_string(Method m) {
  switch (m) {
    case Method::frost: return "frost";
    case Method::kn: return "kn";
    case Method::klem: return "klem";
  }
  return "?";
}

std::string to_string(InitKind k) { return k == InitKind::svca ? "svca" : "random"; }

Method method_from_string(const std::string& s) {
  if (s == "frost") return Method::frost;
  if (s == "kn") return Method::kn;
  if (s == "klem") return Method::klem;
  throw std::invalid_argument("unknown method: " + s);
}

InitKind init_from_string(const std::string& s) {
  if (s == "svca") return InitKind::svca;
  if (s == "random") return InitKind::random;
  throw std::invalid_argument("unknown init: " + s);
}

namespace {

RunRecord run_once(const Graph& g, const DetectConfig& cfg, int index, const Basis* basis,
                   const Labels* truth) {
  RunRecord rec;
  rec.run_index = index;
  rec.seed = cfg.base_seed + static_cast<std::uint64_t>(index);

  const auto t0 = std::chrono::steady_clock::now();
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (cfg.timeout_s)
    deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(*cfg.timeout_s));

  ScaledAssignment z;
  MixingMatrix theta;
  Partition init_partition;
  if (cfg.init == InitKind::svca) {
    SvcaConfig sc = cfg.svca;
    sc.seed = rec.seed;
    SvcaInit init = svca_init(g, cfg.r, sc, basis);
    z = std::move(init.z);
    theta = std::move(init.theta);
    init_partition = std::move(init.partition);
  } else {
    std::tie(z, theta) = random_init(g, cfg.r, rec.seed);
    init_partition = random_partition(g.node_count(), cfg.r, rec.seed);
  }

  if (cfg.method == Method::frost) {
    FrostConfig fc = cfg.frost;
    fc.seed = rec.seed;
    fc.deadline = deadline;
    FrostResult res = frost_solve(g, std::move(z), std::move(theta), fc);
    rec.objective = res.final_error();
    rec.objective_kind = "frobenius_error";
    rec.iterations = res.iterations;
    rec.timed_out = res.timed_out;
    rec.partition = to_partition(res.z, ZeroRowPolicy::random, rec.seed);
  } else {
    InferConfig ic = cfg.infer;
    ic.seed = rec.seed;
    ic.deadline = deadline;
    InferResult res = cfg.method == Method::kn ? kn_infer(g, cfg.r, std::move(init_partition), ic)
                                               : klem_infer(g, cfg.r, std::move(init_partition), ic);
    rec.objective = res.log_likelihood;
    rec.objective_kind = "log_likelihood";
    rec.iterations = res.sweeps;
    rec.timed_out = res.timed_out;
    rec.partition = std::move(res.partition);
  }
  rec.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (truth) {
    rec.nmi = nmi(rec.partition.assignment, truth->assignment);
    rec.ami = ami_max(rec.partition.assignment, truth->assignment);
  }
  return rec;
}

}  // namespace

DetectOutcome detect(const Graph& g, const DetectConfig& cfg, const Labels* truth) {
  if (cfg.runs < 1) throw std::invalid_argument("detect: runs must be >= 1");

  // One eigensolve shared by all SVCA runs; the per-run randomness lives in
  // the direction sampling.
  std::optional<Basis> basis;
  if (cfg.init == InitKind::svca) {
    SvcaConfig sc = cfg.svca;
    sc.seed = cfg.base_seed;
    basis = dominant_subspace(g, cfg.r, sc);
  }
  const Basis* basis_ptr = basis ? &*basis : nullptr;

  DetectOutcome out;
  out.method = cfg.method;
  out.init = cfg.init;
  out.runs.resize(cfg.runs);

  const int workers = std::max(1, std::min(cfg.workers, cfg.runs));
  if (workers == 1) {
    for (int k = 0; k < cfg.runs; ++k) out.runs[k] = run_once(g, cfg, k, basis_ptr, truth);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < cfg.runs; k = next.fetch_add(1)) {
          try {
            out.runs[k] = run_once(g, cfg, k, basis_ptr, truth);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  const bool maximize = cfg.method != Method::frost;
  out.best_index = 0;
  for (int k = 1; k < cfg.runs; ++k) {
    const double a = out.runs[k].objective, b = out.runs[out.best_index].objective;
    if (maximize ? a > b : a < b) out.best_index = k;
  }
  return out;
}

void write_detect_outputs(const DetectOutcome& outcome, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir / (to_string(outcome.method) + "-" + to_string(outcome.init));
  fs::create_directories(dir);

  for (const RunRecord& rec : outcome.runs) {
    nlohmann::json j;
    j["run"] = rec.run_index;
    j["method"] = to_string(outcome.method);
    j["init"] = to_string(outcome.init);
    j["seed"] = rec.seed;
    j["objective"] = rec.objective;
    j["objective_kind"] = rec.objective_kind;
    j["runtime_seconds"] = rec.runtime_seconds;
    j["iterations"] = rec.iterations;
    j["timed_out"] = rec.timed_out;
    if (rec.nmi) j["nmi"] = *rec.nmi;
    if (rec.ami) j["ami"] = *rec.ami;
    j["partition_file"] =
        rec.run_index == outcome.best_index ? (dir / "best.labels").string() : "";
    std::ofstream outf(dir / ("run-" + std::to_string(rec.run_index) + ".json"));
    outf << j.dump(2) << "\n";
  }
  save_partition(outcome.best().partition, dir / "best.labels");

  std::ofstream csv(dir / "summary.csv");
  csv << "run,seed,objective,objective_kind,runtime_seconds,iterations,timed_out,nmi,ami,best\n";
  for (const RunRecord& rec : outcome.runs) {
    csv << rec.run_index << ',' << rec.seed << ',' << rec.objective << ',' << rec.objective_kind
        << ',' << rec.runtime_seconds << ',' << rec.iterations << ',' << rec.timed_out << ',';
    if (rec.nmi) csv << *rec.nmi;
    csv << ',';
    if (rec.ami) csv << *rec.ami;
    csv << ',' << (rec.run_index == outcome.best_index ? 1 : 0) << "\n";
  }
}

std::vector<BenchRow> bench_scaling(const std::vector<PlantedSpec>& specs,
                                    const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  for (const PlantedSpec& spec : specs) {
    const PlantedFactors planted = build_planted_factors(spec);
    const Graph g = sample_graph(planted.z, planted.theta, spec.seed);
    Labels truth;
    truth.assignment = planted.partition.assignment;
    truth.r = planted.partition.r;

    for (Method m : opts.methods) {
      DetectConfig cfg;
      cfg.method = m;
      cfg.init = opts.init;
      cfg.r = spec.r;
      cfg.runs = opts.runs;
      cfg.base_seed = opts.base_seed;
      cfg.timeout_s = opts.timeout_s;
      cfg.frost = opts.frost;
      cfg.infer = opts.infer;
      cfg.svca = opts.svca;

      BenchRow row;
      row.n = g.node_count();
      row.edges = g.total() / 2;
      row.method = to_string(m);
      row.init = to_string(opts.init);
      if (opts.timeout_s && *opts.timeout_s <= 0.0) {
        // Zero budget: record the rows without running anything.
        row.timed_out = opts.runs;
        rows.push_back(row);
        continue;
      }
      const DetectOutcome outcome = detect(g, cfg, &truth);
      double rt = 0.0, iters = 0.0, per_iter = 0.0, ami_sum = 0.0;
      for (const RunRecord& rec : outcome.runs) {
        if (rec.timed_out) {
          row.timed_out++;
          continue;
        }
        row.completed++;
        rt += rec.runtime_seconds;
        iters += rec.iterations;
        per_iter += rec.runtime_seconds / std::max(1, rec.iterations);
        ami_sum += rec.ami.value_or(0.0);
      }
      if (row.completed > 0) {
        row.mean_runtime_s = rt / row.completed;
        row.mean_iterations = iters / row.completed;
        row.mean_runtime_per_iter_s = per_iter / row.completed;
        row.mean_ami = ami_sum / row.completed;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot write bench csv: " + path.string());
  csv << "n,edges,method,init,completed,timed_out,mean_runtime_s,mean_iterations,"
         "mean_runtime_per_iter_s,mean_ami\n";
  for (const BenchRow& r : rows) {
    csv << r.n << ',' << r.edges << ',' << r.method << ',' << r.init << ',' << r.completed << ','
        << r.timed_out << ',' << r.mean_runtime_s << ',' << r.mean_iterations << ','
        << r.mean_runtime_per_iter_s << ',' << r.mean_ami << "\n";
  }
}

}  // namespace frost
