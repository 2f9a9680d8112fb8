#include "lqgraph/graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

#include "lqgraph/counter_rng.hpp"
#include "lqgraph/errors.hpp"

namespace lqg {

namespace {

constexpr std::uint64_t kStreamErdosRenyi = 0x4552;
constexpr std::uint64_t kStreamPairing = 0x5052;
constexpr int kPairingRetryCap = 1000;

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep))
    out.push_back(item);
  return out;
}

int parse_int(const std::string &s, const std::string &what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size())
      throw ParameterError("");
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw ParameterError("");
    return static_cast<int>(v);
  } catch (const std::exception &) {
    throw ParameterError("graph spec: cannot parse " + what + " from '" + s + "'");
  }
}

double parse_double(const std::string &s, const std::string &what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
      throw ParameterError("");
    return v;
  } catch (const std::exception &) {
    throw ParameterError("graph spec: cannot parse " + what + " from '" + s + "'");
  }
}

std::uint64_t parse_seed(const std::string &s) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size())
      throw ParameterError("");
    return v;
  } catch (const std::exception &) {
    throw ParameterError("graph spec: cannot parse seed from '" + s + "'");
  }
}

void expect_args(const std::vector<std::string> &parts, std::size_t count,
                 const std::string &usage) {
  if (parts.size() != count + 1)
    throw ParameterError("graph spec: expected " + usage);
}

} // namespace

const char *to_string(GraphKind kind) {
  switch (kind) {
  case GraphKind::complete: return "complete";
  case GraphKind::cycle: return "cycle";
  case GraphKind::torus: return "torus";
  case GraphKind::erdos_renyi: return "erdos_renyi";
  case GraphKind::random_regular: return "random_regular";
  case GraphKind::edge_list: return "edge_list";
  }
  return "unknown";
}

const char *to_string(TransitiveHint hint) {
  switch (hint) {
  case TransitiveHint::known_transitive: return "known_transitive";
  case TransitiveHint::unknown: return "unknown";
  case TransitiveHint::verified: return "verified";
  case TransitiveHint::not_transitive: return "not_transitive";
  }
  return "unknown";
}

GraphSpec parse_graph_spec(const std::string &text) {
  const auto parts = split(text, ':');
  if (parts.empty())
    throw ParameterError("graph spec: empty");
  const std::string &kind = parts[0];
  GraphSpec spec;
  if (kind == "complete") {
    expect_args(parts, 1, "complete:N");
    spec.kind = GraphKind::complete;
    spec.n = parse_int(parts[1], "n");
  } else if (kind == "cycle") {
    expect_args(parts, 1, "cycle:N");
    spec.kind = GraphKind::cycle;
    spec.n = parse_int(parts[1], "n");
  } else if (kind == "torus") {
    expect_args(parts, 2, "torus:SIDE:D");
    spec.kind = GraphKind::torus;
    spec.side = parse_int(parts[1], "side");
    spec.dim = parse_int(parts[2], "d");
  } else if (kind == "er" || kind == "erdos_renyi") {
    expect_args(parts, 3, "er:N:P:SEED");
    spec.kind = GraphKind::erdos_renyi;
    spec.n = parse_int(parts[1], "n");
    spec.p = parse_double(parts[2], "p");
    spec.seed = parse_seed(parts[3]);
  } else if (kind == "regular" || kind == "random_regular") {
    expect_args(parts, 3, "regular:N:D:SEED");
    spec.kind = GraphKind::random_regular;
    spec.n = parse_int(parts[1], "n");
    spec.degree = parse_int(parts[2], "d");
    spec.seed = parse_seed(parts[3]);
  } else if (kind == "edges" || kind == "edge_list") {
    if (parts.size() < 2)
      throw ParameterError("graph spec: expected edges:PATH");
    spec.kind = GraphKind::edge_list;
    spec.path = text.substr(kind.size() + 1);
  } else {
    throw ParameterError("graph spec: unknown kind '" + kind + "'");
  }
  return spec;
}

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, GraphKind tag,
             TransitiveHint hint)
    : n_(n), adj_(n > 0 ? n : 0), tag_(tag), hint_(hint) {
  if (n < 1)
    throw ParameterError("graph needs at least one vertex");
  for (auto &[u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ParameterError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                           ") out of range for n=" + std::to_string(n));
    if (u == v)
      throw ParameterError("self-loop at vertex " + std::to_string(u));
    if (u > v)
      std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw ParameterError("duplicate edge in simple graph");
  edges_ = std::move(edges);
  for (const auto &[u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  degrees_.resize(n);
  for (int v = 0; v < n; ++v) {
    std::sort(adj_[v].begin(), adj_[v].end());
    degrees_[v] = static_cast<int>(adj_[v].size());
  }
}

bool Graph::has_edge(int u, int v) const {
  const auto &a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto &[u, v] : edges_) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Graph Graph::with_hint(TransitiveHint hint) const {
  Graph g = *this;
  g.hint_ = hint;
  return g;
}

bool Graph::is_connected() const {
  const auto d = graph_distances(*this, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x == kInfiniteDistance; });
}

std::optional<int> Graph::first_isolated_vertex() const {
  for (int v = 0; v < n_; ++v)
    if (degrees_[v] == 0)
      return v;
  return std::nullopt;
}

Graph complete_graph(int n) {
  if (n < 2)
    throw ParameterError("complete graph needs n >= 2");
  std::vector<std::pair<int, int>> e;
  e.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      e.emplace_back(u, v);
  return Graph(n, std::move(e), GraphKind::complete, TransitiveHint::known_transitive);
}

Graph cycle_graph(int n) {
  if (n < 3)
    throw ParameterError("cycle needs n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v)
    e.emplace_back(v, (v + 1) % n);
  return Graph(n, std::move(e), GraphKind::cycle, TransitiveHint::known_transitive);
}

Graph torus_graph(int side, int dim) {
  if (side < 3)
    throw ParameterError("torus needs side >= 3");
  if (dim < 1)
    throw ParameterError("torus needs d >= 1");
  long long total = 1;
  for (int k = 0; k < dim; ++k) {
    total *= side;
    if (total > 1'000'000)
      throw ParameterError("torus too large");
  }
  const int n = static_cast<int>(total);
  std::vector<std::pair<int, int>> e;
  e.reserve(static_cast<std::size_t>(n) * dim);
  for (int v = 0; v < n; ++v) {
    int stride = 1;
    for (int k = 0; k < dim; ++k) {
      const int coord = (v / stride) % side;
      const int up = v + (((coord + 1) % side) - coord) * stride;
      e.emplace_back(v, up);
      stride *= side;
    }
  }
  return Graph(n, std::move(e), GraphKind::torus, TransitiveHint::known_transitive);
}

Graph erdos_renyi_graph(int n, double p, std::uint64_t seed) {
  if (n < 1)
    throw ParameterError("Erdos-Renyi graph needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterError("Erdos-Renyi probability must lie in [0,1]");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng::uniform(seed, kStreamErdosRenyi, static_cast<std::uint64_t>(u),
                       static_cast<std::uint64_t>(v)) < p)
        e.emplace_back(u, v);
  return Graph(n, std::move(e), GraphKind::erdos_renyi, TransitiveHint::unknown);
}

Graph random_regular_graph(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 0)
    throw ParameterError("random regular graph needs n >= 1, d >= 0");
  if (d >= n)
    throw ParameterError("random regular graph needs d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw ParameterError("random regular graph needs n*d even");
  const std::size_t stubs = static_cast<std::size_t>(n) * d;
  std::vector<int> points(stubs);
  for (int attempt = 0; attempt < kPairingRetryCap; ++attempt) {
    for (std::size_t k = 0; k < stubs; ++k)
      points[k] = static_cast<int>(k / d);
    for (std::size_t k = stubs; k > 1; --k) {
      const auto j = rng::uniform_below(k, seed, kStreamPairing,
                                        static_cast<std::uint64_t>(attempt), k - 1);
      std::swap(points[k - 1], points[j]);
    }
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> e;
    e.reserve(stubs / 2);
    bool ok = true;
    for (std::size_t k = 0; k + 1 < stubs && ok; k += 2) {
      int u = points[k], v = points[k + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v)
        std::swap(u, v);
      ok = seen.emplace(u, v).second;
      e.emplace_back(u, v);
    }
    if (ok)
      return Graph(n, std::move(e), GraphKind::random_regular, TransitiveHint::unknown);
  }
  throw GenerationError("pairing model exceeded retry cap of " +
                            std::to_string(kPairingRetryCap) + " attempts",
                        kPairingRetryCap);
}

Graph edge_list_graph(int n, const std::vector<std::pair<int, int>> &edges) {
  return Graph(n, edges, GraphKind::edge_list, TransitiveHint::unknown);
}

Graph read_edge_list(std::istream &in) {
  std::vector<std::pair<int, int>> edges;
  int max_vertex = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream is(line);
    std::vector<long long> fields;
    std::string tok;
    while (is >> tok) {
      try {
        std::size_t pos = 0;
        fields.push_back(std::stoll(tok, &pos));
        if (pos != tok.size())
          throw ParameterError("");
      } catch (const std::exception &) {
        throw ParameterError("edge list line " + std::to_string(line_no) +
                             ": bad token '" + tok + "'");
      }
    }
    if (fields.empty())
      continue;
    if (fields.size() > 2)
      throw ParameterError("edge list line " + std::to_string(line_no) +
                           ": expected 'u v'");
    for (long long f : fields) {
      if (f < 1 || f > 1'000'000)
        throw ParameterError("edge list line " + std::to_string(line_no) +
                             ": vertex indices are 1-based");
      max_vertex = std::max(max_vertex, static_cast<int>(f));
    }
    if (fields.size() == 2)
      edges.emplace_back(static_cast<int>(fields[0]) - 1, static_cast<int>(fields[1]) - 1);
  }
  if (max_vertex == 0)
    throw ParameterError("edge list declares no vertices");
  return edge_list_graph(max_vertex, edges);
}

Graph load_edge_list(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParameterError("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

Graph build_graph(const GraphSpec &spec) {
  switch (spec.kind) {
  case GraphKind::complete: return complete_graph(spec.n);
  case GraphKind::cycle: return cycle_graph(spec.n);
  case GraphKind::torus: return torus_graph(spec.side, spec.dim);
  case GraphKind::erdos_renyi: return erdos_renyi_graph(spec.n, spec.p, spec.seed);
  case GraphKind::random_regular:
    return random_regular_graph(spec.n, spec.degree, spec.seed);
  case GraphKind::edge_list:
    if (!spec.path.empty())
      return load_edge_list(spec.path);
    return edge_list_graph(spec.edge_list_n, spec.edges);
  }
  throw ParameterError("unknown graph kind");
}

std::vector<int> graph_distances(const Graph &g, int source) {
  if (source < 0 || source >= g.n())
    throw ParameterError("vertex " + std::to_string(source) + " out of range");
  std::vector<int> dist(g.n(), kInfiniteDistance);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int w : g.neighbors(u))
      if (dist[w] == kInfiniteDistance) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
  }
  return dist;
}

DegreeStats degree_stats(const Graph &g) {
  const auto &deg = g.degrees();
  DegreeStats s;
  s.min_degree = *std::min_element(deg.begin(), deg.end());
  s.max_degree = *std::max_element(deg.begin(), deg.end());
  s.is_regular = s.min_degree == s.max_degree;
  if (s.is_regular)
    s.common_degree = s.min_degree;
  return s;
}

namespace {

// Backtracking search for an automorphism with phi(0) = target. Vertices
// are assigned in BFS order from 0 so every new vertex (after the first in
// its component) has an already-mapped neighbor, which prunes hard.
bool find_automorphism(const Graph &g, int target) {
  const int n = g.n();
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int root = 0; root < n; ++root) {
    if (seen[root])
      continue;
    std::queue<int> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      order.push_back(u);
      for (int w : g.neighbors(u))
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
    }
  }
  std::vector<int> phi(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
    if (k == order.size())
      return true;
    const int u = order[k];
    for (int img = 0; img < n; ++img) {
      if (used[img] || (k == 0 && img != target))
        continue;
      if (g.degree(img) != g.degree(u))
        continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        const int w = order[j];
        ok = g.has_edge(u, w) == g.has_edge(img, phi[w]);
      }
      if (!ok)
        continue;
      phi[u] = img;
      used[img] = 1;
      if (extend(k + 1))
        return true;
      phi[u] = -1;
      used[img] = 0;
    }
    return false;
  };
  return extend(0);
}

} // namespace

TransitiveHint verify_transitive(const Graph &g, int max_n) {
  if (!degree_stats(g).is_regular)
    return TransitiveHint::not_transitive;
  if (g.n() > max_n)
    return g.hint();
  for (int v = 1; v < g.n(); ++v)
    if (!find_automorphism(g, v))
      return TransitiveHint::not_transitive;
  return TransitiveHint::verified;
}

} // namespace lqg
