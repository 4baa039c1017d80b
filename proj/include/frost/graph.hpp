#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frost {

/// Thrown on malformed input files; message carries file path and line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse symmetric multigraph in CSR form.
///
/// Entries are nonnegative integer edge multiplicities. Off-diagonal A(i,j)
/// is the number of edges between i and j; the diagonal A(i,i) stores twice
/// the number of self-edges (kept as-is when a graph is built from raw
/// triplets, so odd diagonals are representable). Immutable after build;
/// safe for concurrent reads.
class Graph {
 public:
  struct Entry {
    int i = 0;
    int j = 0;
    std::int64_t mult = 1;
  };

  Graph() = default;

  /// Builds from accumulating entries: each entry adds `mult` to A(i,j) and,
  /// for i != j, to A(j,i). Diagonal entries add to A(i,i) exactly once.
  static Graph build(int n, std::vector<Entry> entries);

  int node_count() const { return n_; }
  std::int64_t edge_entry_count() const { return static_cast<std::int64_t>(col_.size()); }

  /// Row sum d(i) = sum_j A(i,j). Self-loops contribute twice via the
  /// diagonal convention.
  std::int64_t degree(int i) const { return degree_[i]; }
  const std::vector<std::int64_t>& degrees() const { return degree_; }

  /// Sum of all degrees (= sum_ij A(i,j)), twice the edge count.
  std::int64_t total() const { return total_; }

  /// A(i,i).
  std::int64_t self_mult(int i) const { return diag_[i]; }

  std::span<const int> neighbors(int i) const {
    return {col_.data() + row_ptr_[i], col_.data() + row_ptr_[i + 1]};
  }
  std::span<const std::int64_t> multiplicities(int i) const {
    return {mult_.data() + row_ptr_[i], mult_.data() + row_ptr_[i + 1]};
  }

  /// A(i,j) by binary search over row i; O(log d(i)).
  std::int64_t entry(int i, int j) const;

 private:
  int n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<int> col_;
  std::vector<std::int64_t> mult_;
  std::vector<std::int64_t> degree_;
  std::vector<std::int64_t> diag_;
  std::int64_t total_ = 0;
};

struct LoadOptions {
  bool one_indexed = false;
  /// true: each line is one undirected edge; "i i" lines count self-edges
  /// (adding 2*mult to the diagonal). false: lines are raw matrix entries of
  /// one triangle, diagonal stored as-is.
  bool symmetrize = true;
  bool drop_self_loops = false;
};

struct LoadedGraph {
  Graph graph;
  /// Original node id for each dense index. Identity when the file declared
  /// a node count; otherwise ids are densified in ascending order.
  std::vector<std::int64_t> original_ids;
};

/// Reads a whitespace-separated edge list. `#` starts a comment line. A line
/// with a single integer declares the node count (allows trailing isolated
/// nodes). Lines have two tokens `i j` or three `i j mult`.
LoadedGraph load_edge_list(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Writes the node count followed by one raw entry per line for the upper
/// triangle (diagonal as stored). Reload with symmetrize=false to round-trip.
void save_edge_list(const Graph& g, const std::filesystem::path& path);

struct ComponentResult {
  Graph graph;
  std::vector<int> old_to_new;  ///< -1 for dropped nodes
  std::vector<int> new_to_old;
};

/// Induced subgraph on the largest connected component; ties broken in favor
/// of the component containing the smallest node index.
ComponentResult largest_connected_component(const Graph& g);

/// Ground-truth community labels; -1 marks an unlabeled node.
struct Labels {
  std::vector<int> assignment;
  int r = 0;
};

/// Reads `node_id community_id` pairs and compacts community ids to 0..r-1.
/// `id_to_index` maps file node ids to dense graph indices (pass the loaded
/// graph's original_ids); nodes without a line stay unlabeled.
Labels load_labels(const std::filesystem::path& path, std::span<const std::int64_t> node_ids,
                   bool one_indexed = false);

void save_labels(std::span<const int> assignment, const std::filesystem::path& path);

}  // namespace frost
