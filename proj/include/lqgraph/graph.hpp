#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lqg {

enum class GraphKind { complete, cycle, torus, erdos_renyi, random_regular, edge_list };

enum class TransitiveHint { known_transitive, unknown, verified, not_transitive };

const char *to_string(GraphKind kind);
const char *to_string(TransitiveHint hint);

/// Parameters of a graph constructor. Only the fields relevant to `kind`
/// are read.
struct GraphSpec {
  GraphKind kind = GraphKind::complete;
  int n = 0;          // complete, cycle, erdos_renyi, random_regular
  int side = 0;       // torus
  int dim = 0;        // torus
  int degree = 0;     // random_regular
  double p = 0.0;     // erdos_renyi
  std::uint64_t seed = 0;
  std::string path;   // edge_list file (1-based "u v" lines)
  std::vector<std::pair<int, int>> edges; // edge_list given inline, 0-based
  int edge_list_n = 0; // edge_list vertex count when edges are inline
};

/// Parses "KIND:ARGS", e.g. "complete:5", "cycle:6", "torus:3:2" (side:d),
/// "er:50:0.3:7" (n:p:seed), "regular:2000:3:1" (n:d:seed), "edges:file".
GraphSpec parse_graph_spec(const std::string &text);

/// Simple undirected graph. Immutable after construction.
class Graph {
public:
  Graph(int n, std::vector<std::pair<int, int>> edges, GraphKind tag,
        TransitiveHint hint);

  int n() const { return n_; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<int> &neighbors(int v) const { return adj_[v]; }
  const std::vector<int> &degrees() const { return degrees_; }
  /// Edges (u, v) with u < v, sorted.
  const std::vector<std::pair<int, int>> &edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(int u, int v) const;
  Eigen::MatrixXd adjacency() const;

  GraphKind tag() const { return tag_; }
  TransitiveHint hint() const { return hint_; }
  Graph with_hint(TransitiveHint hint) const;

  bool is_connected() const;
  std::optional<int> first_isolated_vertex() const;

private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> degrees_;
  GraphKind tag_;
  TransitiveHint hint_;
};

Graph build_graph(const GraphSpec &spec);

Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph torus_graph(int side, int dim);
Graph erdos_renyi_graph(int n, double p, std::uint64_t seed);
Graph random_regular_graph(int n, int d, std::uint64_t seed);
/// Graph on n vertices from 0-based edges. Duplicate edges and self-loops
/// are rejected.
Graph edge_list_graph(int n, const std::vector<std::pair<int, int>> &edges);
/// Reads the 1-based "u v" text format. A line holding a single index
/// declares a vertex without adding an edge.
Graph read_edge_list(std::istream &in);
Graph load_edge_list(const std::string &path);

inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

/// BFS distances from `source`; unreachable vertices get kInfiniteDistance.
std::vector<int> graph_distances(const Graph &g, int source);

struct DegreeStats {
  int min_degree = 0;
  int max_degree = 0;
  bool is_regular = false;
  std::optional<int> common_degree;
};

DegreeStats degree_stats(const Graph &g);

/// Brute-force vertex-transitivity check for n <= max_n. Larger graphs
/// return known_transitive when the constructor guarantees it and unknown
/// otherwise. Irregular graphs are not transitive.
TransitiveHint verify_transitive(const Graph &g, int max_n = 12);

} // namespace lqg
