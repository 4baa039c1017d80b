#include "frost/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace frost {

Graph Graph::build(int n, std::vector<Entry> entries) {
  if (n < 0) throw std::invalid_argument("graph: negative node count");
  for (const Entry& e : entries) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
      throw std::invalid_argument("graph: entry index out of range");
    if (e.mult < 0) throw std::invalid_argument("graph: negative multiplicity");
  }

  // Mirror off-diagonal entries, then sort and merge duplicates into CSR.
  std::vector<Entry> all;
  all.reserve(entries.size() * 2);
  for (const Entry& e : entries) {
    if (e.mult == 0) continue;
    all.push_back(e);
    if (e.i != e.j) all.push_back({e.j, e.i, e.mult});
  }
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  Graph g;
  g.n_ = n;
  g.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.degree_.assign(n, 0);
  g.diag_.assign(n, 0);
  for (std::size_t k = 0; k < all.size();) {
    std::size_t k2 = k;
    std::int64_t m = 0;
    while (k2 < all.size() && all[k2].i == all[k].i && all[k2].j == all[k].j) m += all[k2++].mult;
    g.col_.push_back(all[k].j);
    g.mult_.push_back(m);
    g.row_ptr_[static_cast<std::size_t>(all[k].i) + 1]++;
    g.degree_[all[k].i] += m;
    if (all[k].i == all[k].j) g.diag_[all[k].i] = m;
    g.total_ += m;
    k = k2;
  }
  for (int i = 0; i < n; ++i) g.row_ptr_[i + 1] += g.row_ptr_[i];
  return g;
}

std::int64_t Graph::entry(int i, int j) const {
  auto nb = neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0;
  return mult_[row_ptr_[i] + static_cast<std::size_t>(it - nb.begin())];
}

namespace {

std::int64_t parse_int(const std::string& tok, const std::filesystem::path& path, int line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": expected integer, got '" +
                     tok + "'");
  }
  return v;
}

}  // namespace

LoadedGraph load_edge_list(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list: " + path.string());

  struct RawEdge {
    std::int64_t i, j, mult;
  };
  std::vector<RawEdge> raw;
  std::int64_t declared_n = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) {
      if (t[0] == '#') break;
      toks.push_back(t);
    }
    if (toks.empty()) continue;
    if (toks.size() == 1) {
      std::int64_t n = parse_int(toks[0], path, lineno);
      if (n < 0) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative node count");
      declared_n = std::max(declared_n, n);
      continue;
    }
    if (toks.size() > 3) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 'i j [mult]', got " +
                       std::to_string(toks.size()) + " tokens");
    }
    std::int64_t i = parse_int(toks[0], path, lineno);
    std::int64_t j = parse_int(toks[1], path, lineno);
    std::int64_t m = toks.size() == 3 ? parse_int(toks[2], path, lineno) : 1;
    if (opts.one_indexed) {
      if (i < 1 || j < 1)
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": index < 1 in one-indexed file");
      --i, --j;
    }
    if (i < 0 || j < 0)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative node index");
    if (m < 0) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative multiplicity");
    if (i >= std::numeric_limits<int>::max() || j >= std::numeric_limits<int>::max())
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": node index overflow");
    if (opts.drop_self_loops && i == j) continue;
    raw.push_back({i, j, m});
  }

  LoadedGraph out;
  std::vector<Graph::Entry> entries;
  entries.reserve(raw.size());
  std::int64_t n = 0;
  if (declared_n >= 0) {
    n = declared_n;
    for (const RawEdge& e : raw) {
      if (e.i >= n || e.j >= n)
        throw ParseError(path.string() + ": node index " + std::to_string(std::max(e.i, e.j)) +
                         " exceeds declared node count " + std::to_string(n));
    }
    out.original_ids.resize(n);
    for (std::int64_t k = 0; k < n; ++k) out.original_ids[k] = opts.one_indexed ? k + 1 : k;
    for (const RawEdge& e : raw) {
      std::int64_t m = (opts.symmetrize && e.i == e.j) ? 2 * e.mult : e.mult;
      entries.push_back({static_cast<int>(e.i), static_cast<int>(e.j), m});
    }
  } else {
    // Densify arbitrary ids in ascending order, keeping the id map.
    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (const RawEdge& e : raw) {
      ids.push_back(e.i);
      ids.push_back(e.j);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::unordered_map<std::int64_t, int> dense;
    dense.reserve(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) dense[ids[k]] = static_cast<int>(k);
    n = static_cast<std::int64_t>(ids.size());
    out.original_ids = std::move(ids);
    for (const RawEdge& e : raw) {
      std::int64_t m = (opts.symmetrize && e.i == e.j) ? 2 * e.mult : e.mult;
      entries.push_back({dense[e.i], dense[e.j], m});
    }
  }
  out.graph = Graph::build(static_cast<int>(n), std::move(entries));
  return out;
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write edge list: " + path.string());
  outf << g.node_count() << "\n";
  for (int i = 0; i < g.node_count(); ++i) {
    auto nb = g.neighbors(i);
    auto mu = g.multiplicities(i);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (nb[k] >= i) outf << i << ' ' << nb[k] << ' ' << mu[k] << "\n";
  }
  if (!outf) throw std::runtime_error("write failed: " + path.string());
}

ComponentResult largest_connected_component(const Graph& g) {
  const int n = g.node_count();
  if (n == 0) throw std::invalid_argument("largest_connected_component: empty graph");

  std::vector<int> comp(n, -1);
  int best_comp = -1, best_size = 0, n_comp = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    int id = n_comp++;
    int size = 0;
    stack.push_back(s);
    comp[s] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      ++size;
      for (int v : g.neighbors(u)) {
        if (comp[v] < 0) {
          comp[v] = id;
          stack.push_back(v);
        }
      }
    }
    if (size > best_size) {  // strict: earlier component wins ties
      best_size = size;
      best_comp = id;
    }
  }

  ComponentResult res;
  res.old_to_new.assign(n, -1);
  res.new_to_old.reserve(best_size);
  for (int i = 0; i < n; ++i) {
    if (comp[i] == best_comp) {
      res.old_to_new[i] = static_cast<int>(res.new_to_old.size());
      res.new_to_old.push_back(i);
    }
  }
  std::vector<Graph::Entry> entries;
  for (int i = 0; i < n; ++i) {
    if (res.old_to_new[i] < 0) continue;
    auto nb = g.neighbors(i);
    auto mu = g.multiplicities(i);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (nb[k] >= i) entries.push_back({res.old_to_new[i], res.old_to_new[nb[k]], mu[k]});
  }
  res.graph = Graph::build(best_size, std::move(entries));
  return res;
}

Labels load_labels(const std::filesystem::path& path, std::span<const std::int64_t> node_ids,
                   bool one_indexed) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open labels: " + path.string());
  std::unordered_map<std::int64_t, int> dense;
  dense.reserve(node_ids.size());
  for (std::size_t k = 0; k < node_ids.size(); ++k)
    dense[node_ids[k]] = static_cast<int>(k);

  Labels labels;
  labels.assignment.assign(node_ids.size(), -1);
  std::vector<std::int64_t> raw_label(node_ids.size(), -1);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) {
      if (t[0] == '#') break;
      toks.push_back(t);
    }
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 'node community'");
    std::int64_t id = parse_int(toks[0], path, lineno);
    std::int64_t lab = parse_int(toks[1], path, lineno);
    if (one_indexed) --id;
    auto it = dense.find(id);
    if (it == dense.end()) continue;  // label for a node not in the graph
    raw_label[it->second] = lab;
  }

  // Compact distinct label values to 0..r-1 in ascending order.
  std::vector<std::int64_t> values;
  for (std::int64_t v : raw_label)
    if (v >= 0) values.push_back(v);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::unordered_map<std::int64_t, int> compact;
  for (std::size_t k = 0; k < values.size(); ++k) compact[values[k]] = static_cast<int>(k);
  for (std::size_t i = 0; i < raw_label.size(); ++i)
    if (raw_label[i] >= 0) labels.assignment[i] = compact[raw_label[i]];
  labels.r = static_cast<int>(values.size());
  return labels;
}

void save_labels(std::span<const int> assignment, const std::filesystem::path& path) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write labels: " + path.string());
  for (std::size_t i = 0; i < assignment.size(); ++i) outf << i << ' ' << assignment[i] << "\n";
  if (!outf) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace frost
