// Command-line driver: community detection (FROST / KN / KL-EM), partition
// evaluation, planted-graph generation, scaling benchmarks and
// largest-component extraction.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "frost/bench.hpp"
#include "frost/dcbm.hpp"
#include "frost/generator.hpp"
#include "frost/graph.hpp"
#include "frost/metrics.hpp"
#include "frost/solver.hpp"
#include "frost/svca.hpp"

namespace {

namespace fs = std::filesystem;

struct GraphArgs {
  std::string path;
  bool one_indexed = false;
  bool raw = false;
  bool drop_self_loops = false;
};

void add_graph_options(CLI::App* cmd, GraphArgs& args) {
  cmd->add_option("--graph", args.path, "edge list file")->required();
  cmd->add_flag("--one-indexed", args.one_indexed, "node ids start at 1");
  cmd->add_flag("--raw", args.raw, "lines are raw matrix entries (no symmetrization)");
  cmd->add_flag("--drop-self-loops", args.drop_self_loops, "ignore self-loops on load");
}

frost::LoadedGraph load_graph(const GraphArgs& args) {
  frost::LoadOptions opts;
  opts.one_indexed = args.one_indexed;
  opts.symmetrize = !args.raw;
  opts.drop_self_loops = args.drop_self_loops;
  return frost::load_edge_list(args.path, opts);
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

int run_detect(const GraphArgs& gargs, const std::string& labels_path, int r,
               const std::string& method, const std::string& init, int runs,
               std::uint64_t seed, int max_iter, double rel_tol, int svca_p, double timeout_s,
               bool has_timeout, const std::string& out_dir, int workers) {
  frost::LoadedGraph lg = load_graph(gargs);

  frost::Labels truth;
  bool have_truth = false;
  if (!labels_path.empty()) {
    truth = frost::load_labels(labels_path, lg.original_ids, gargs.one_indexed);
    have_truth = true;
  }

  frost::DetectConfig cfg;
  cfg.method = frost::method_from_string(method);
  cfg.init = frost::init_from_string(init);
  cfg.r = r;
  cfg.runs = runs;
  cfg.base_seed = seed;
  cfg.workers = workers;
  if (has_timeout) cfg.timeout_s = timeout_s;
  cfg.frost.max_outer_iterations = max_iter;
  cfg.frost.rel_tol = rel_tol;
  cfg.svca.p = svca_p;

  const frost::DetectOutcome outcome =
      frost::detect(lg.graph, cfg, have_truth ? &truth : nullptr);

  const fs::path base = fs::path(out_dir) / fs::path(gargs.path).stem();
  frost::write_detect_outputs(outcome, base);

  const frost::RunRecord& best = outcome.best();
  nlohmann::json j;
  j["method"] = method;
  j["init"] = init;
  j["runs"] = runs;
  j["best_run"] = best.run_index;
  j["objective"] = best.objective;
  j["objective_kind"] = best.objective_kind;
  if (best.nmi) j["nmi"] = *best.nmi;
  if (best.ami) j["ami"] = *best.ami;
  j["output_dir"] = (base / (method + "-" + init)).string();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_eval(const std::string& pred_path, const std::string& truth_path) {
  // Both files are node->label maps; join on node id.
  auto read_pairs = [](const std::string& p) {
    std::ifstream in(p);
    if (!in) throw frost::ParseError("cannot open labels: " + p);
    std::vector<std::pair<std::int64_t, int>> pairs;
    std::int64_t node;
    int lab;
    while (in >> node >> lab) pairs.emplace_back(node, lab);
    return pairs;
  };
  auto pred = read_pairs(pred_path);
  auto truth = read_pairs(truth_path);
  std::map<std::int64_t, int> truth_map(truth.begin(), truth.end());
  std::vector<int> a, b;
  for (auto& [node, lab] : pred) {
    auto it = truth_map.find(node);
    if (it == truth_map.end()) continue;
    a.push_back(lab);
    b.push_back(it->second);
  }
  nlohmann::json j;
  j["nodes_compared"] = a.size();
  j["nmi"] = frost::nmi(a, b);
  j["ami"] = frost::ami_max(a, b);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_gen(int n, int r, double mu, double avg_degree, const std::string& sizes_csv,
            bool uniform, double gamma, double d_min, double d_max, std::uint64_t seed,
            const std::string& out_prefix) {
  frost::PlantedSpec spec;
  spec.n = n;
  spec.r = r;
  spec.mu = mu;
  spec.avg_degree = avg_degree;
  spec.seed = seed;
  if (!sizes_csv.empty()) spec.sizes = parse_int_list(sizes_csv);
  spec.degrees = uniform ? frost::DegreeModel::uniform : frost::DegreeModel::power_law;
  spec.gamma = gamma;
  spec.d_min = d_min;
  spec.d_max = d_max;

  const frost::PlantedFactors planted = frost::build_planted_factors(spec);
  const frost::Graph g = frost::sample_graph(planted.z, planted.theta, seed);

  frost::save_edge_list(g, out_prefix + ".edges");
  frost::save_labels(planted.partition.assignment, out_prefix + ".labels");

  nlohmann::json j;
  j["n"] = n;
  j["r"] = r;
  j["mu"] = mu;
  j["avg_degree"] = avg_degree;
  j["seed"] = seed;
  j["degrees"] = uniform ? "uniform" : "power_law";
  if (!uniform) {
    j["gamma"] = gamma;
    j["d_min"] = d_min;
    j["d_max"] = d_max;
  }
  j["edges_realized"] = g.total() / 2;
  std::ofstream sidecar(out_prefix + ".json");
  sidecar << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_bench(const std::string& sizes_csv, const std::string& methods_csv,
              const std::string& init, int runs, double mu, double avg_degree,
              const std::string& r_scale, std::uint64_t seed, double timeout_s, bool has_timeout,
              const std::string& out_csv) {
  std::vector<frost::PlantedSpec> specs;
  for (int n : parse_int_list(sizes_csv)) {
    frost::PlantedSpec spec;
    spec.n = n;
    if (r_scale == "sqrt")
      spec.r = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));
    else
      spec.r = std::stoi(r_scale);
    spec.mu = mu;
    spec.avg_degree = avg_degree;
    spec.degrees = frost::DegreeModel::power_law;
    spec.d_min = avg_degree / 2.0;
    spec.d_max = avg_degree * 2.5;
    spec.seed = seed + static_cast<std::uint64_t>(n);
    specs.push_back(spec);
  }

  frost::BenchOptions opts;
  if (!methods_csv.empty()) {
    std::stringstream ss(methods_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) opts.methods.push_back(frost::method_from_string(tok));
  }
  opts.init = frost::init_from_string(init);
  opts.runs = runs;
  opts.base_seed = seed;
  if (has_timeout) opts.timeout_s = timeout_s;

  const std::vector<frost::BenchRow> rows = frost::bench_scaling(specs, opts);
  frost::write_bench_csv(rows, out_csv);
  std::cout << "wrote " << rows.size() << " rows to " << out_csv << "\n";
  return 0;
}

int run_lcc(const GraphArgs& gargs, const std::string& out_prefix) {
  frost::LoadedGraph lg = load_graph(gargs);
  const frost::ComponentResult lcc = frost::largest_connected_component(lg.graph);
  frost::save_edge_list(lcc.graph, out_prefix + ".edges");
  std::ofstream map_out(out_prefix + ".map");
  for (std::size_t k = 0; k < lcc.new_to_old.size(); ++k)
    map_out << k << ' ' << lg.original_ids[lcc.new_to_old[k]] << "\n";
  std::cout << "largest component: " << lcc.graph.node_count() << " of " << lg.graph.node_count()
            << " nodes, " << lcc.graph.total() / 2 << " edges\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"community detection via orthogonal symmetric trifactorization and "
               "degree-corrected block model inference"};
  app.require_subcommand(1);

  // detect
  GraphArgs detect_graph;
  std::string labels_path, method = "frost", init = "svca", out_dir = "out";
  int r = 2, runs = 10, max_iter = 500, svca_p = 0, workers = 1;
  std::uint64_t seed = 0;
  double rel_tol = 1e-6, timeout_s = 0.0;
  CLI::App* detect = app.add_subcommand("detect", "run community detection");
  add_graph_options(detect, detect_graph);
  detect->add_option("--labels", labels_path, "ground-truth labels for scoring");
  detect->add_option("-r,--communities", r, "number of communities")->required();
  detect->add_option("--method", method, "frost|kn|klem");
  detect->add_option("--init", init, "svca|random");
  detect->add_option("--runs", runs, "independent restarts");
  detect->add_option("--seed", seed, "base seed");
  detect->add_option("--max-iter", max_iter, "outer iteration cap (frost)");
  detect->add_option("--rel-tol", rel_tol, "relative error-decrease stop (frost)");
  detect->add_option("--svca-p", svca_p, "columns averaged per component (0 = auto)");
  CLI::Option* timeout_opt = detect->add_option("--timeout-s", timeout_s, "per-run budget");
  detect->add_option("--out", out_dir, "output directory");
  detect->add_option("--workers", workers, "parallel runs");

  // eval
  std::string pred_path, truth_path;
  CLI::App* eval = app.add_subcommand("eval", "score a partition against ground truth");
  eval->add_option("--pred", pred_path, "predicted labels")->required();
  eval->add_option("--truth", truth_path, "ground-truth labels")->required();

  // gen
  int gen_n = 1000, gen_r = 2;
  double gen_mu = 0.1, gen_avg_degree = 10.0, gen_gamma = 2.0, gen_dmin = 10.0, gen_dmax = 50.0;
  std::string gen_sizes, gen_out = "planted";
  std::uint64_t gen_seed = 0;
  bool gen_uniform = false;
  CLI::App* gen = app.add_subcommand("gen", "sample a planted-partition graph");
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("-r,--communities", gen_r, "community count")->required();
  gen->add_option("--mu", gen_mu, "cross-community edge fraction");
  gen->add_option("--avg-degree", gen_avg_degree, "expected average degree");
  gen->add_option("--sizes", gen_sizes, "explicit community sizes (csv)");
  gen->add_flag("--uniform", gen_uniform, "uniform propensities instead of power law");
  gen->add_option("--gamma", gen_gamma, "power-law exponent");
  gen->add_option("--deg-min", gen_dmin, "propensity support lower end");
  gen->add_option("--deg-max", gen_dmax, "propensity support upper end");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_out, "output prefix");

  // bench
  std::string bench_sizes = "1000,2000", bench_methods = "frost", bench_init = "svca";
  std::string bench_rscale = "sqrt", bench_out = "bench.csv";
  int bench_runs = 3;
  double bench_mu = 0.4, bench_avg_degree = 20.0, bench_timeout = 0.0;
  std::uint64_t bench_seed = 0;
  CLI::App* bench = app.add_subcommand("bench", "scaling measurement on planted graphs");
  bench->add_option("--sizes", bench_sizes, "node counts (csv)");
  bench->add_option("--methods", bench_methods, "methods (csv)");
  bench->add_option("--init", bench_init, "svca|random");
  bench->add_option("--runs", bench_runs, "runs per size and method");
  bench->add_option("--mu", bench_mu, "mixing parameter");
  bench->add_option("--avg-degree", bench_avg_degree, "average degree");
  bench->add_option("--r-scale", bench_rscale, "'sqrt' or a fixed community count");
  bench->add_option("--seed", bench_seed, "base seed");
  CLI::Option* bench_timeout_opt = bench->add_option("--timeout-s", bench_timeout, "per-run budget");
  bench->add_option("--out", bench_out, "output csv");

  // lcc
  GraphArgs lcc_graph;
  std::string lcc_out = "lcc";
  CLI::App* lcc = app.add_subcommand("lcc", "extract the largest connected component");
  add_graph_options(lcc, lcc_graph);
  lcc->add_option("--out", lcc_out, "output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (detect->parsed())
      return run_detect(detect_graph, labels_path, r, method, init, runs, seed, max_iter,
                        rel_tol, svca_p, timeout_s, timeout_opt->count() > 0, out_dir, workers);
    if (eval->parsed()) return run_eval(pred_path, truth_path);
    if (gen->parsed())
      return run_gen(gen_n, gen_r, gen_mu, gen_avg_degree, gen_sizes, gen_uniform, gen_gamma,
                     gen_dmin, gen_dmax, gen_seed, gen_out);
    if (bench->parsed())
      return run_bench(bench_sizes, bench_methods, bench_init, bench_runs, bench_mu,
                       bench_avg_degree, bench_rscale, bench_seed, bench_timeout,
                       bench_timeout_opt->count() > 0, bench_out);
    if (lcc->parsed()) return run_lcc(lcc_graph, lcc_out);
  } catch (const frost::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const frost::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
