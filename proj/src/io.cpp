#include "lqgraph/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lqgraph/errors.hpp"

namespace lqg {

GraphSpec graph_spec_from_json(const json &j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParameterError("graph spec JSON needs a string 'kind'");
  try {
    const std::string kind = j["kind"];
    GraphSpec spec;
    if (kind == "complete" || kind == "cycle") {
      spec.kind = kind == "complete" ? GraphKind::complete : GraphKind::cycle;
      spec.n = j.at("n").get<int>();
    } else if (kind == "torus") {
      spec.kind = GraphKind::torus;
      spec.side = j.at("side").get<int>();
      spec.dim = j.at("d").get<int>();
    } else if (kind == "erdos_renyi" || kind == "er") {
      spec.kind = GraphKind::erdos_renyi;
      spec.n = j.at("n").get<int>();
      spec.p = j.at("p").get<double>();
      spec.seed = j.at("seed").get<std::uint64_t>();
    } else if (kind == "random_regular" || kind == "regular") {
      spec.kind = GraphKind::random_regular;
      spec.n = j.at("n").get<int>();
      spec.degree = j.at("d").get<int>();
      spec.seed = j.at("seed").get<std::uint64_t>();
    } else if (kind == "edge_list" || kind == "edges") {
      spec.kind = GraphKind::edge_list;
      if (j.contains("path")) {
        spec.path = j["path"].get<std::string>();
      } else {
        spec.edge_list_n = j.at("n").get<int>();
        for (const auto &e : j.at("edges")) {
          const int u = e.at(0).get<int>(), v = e.at(1).get<int>();
          spec.edges.emplace_back(u - 1, v - 1);
        }
      }
    } else {
      throw ParameterError("graph spec JSON: unknown kind '" + kind + "'");
    }
    return spec;
  } catch (const json::exception &e) {
    throw ParameterError(std::string("graph spec JSON: ") + e.what());
  }
}

json graph_spec_to_json(const GraphSpec &spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
  case GraphKind::complete:
  case GraphKind::cycle: j["n"] = spec.n; break;
  case GraphKind::torus:
    j["side"] = spec.side;
    j["d"] = spec.dim;
    break;
  case GraphKind::erdos_renyi:
    j["n"] = spec.n;
    j["p"] = spec.p;
    j["seed"] = spec.seed;
    break;
  case GraphKind::random_regular:
    j["n"] = spec.n;
    j["d"] = spec.degree;
    j["seed"] = spec.seed;
    break;
  case GraphKind::edge_list:
    if (!spec.path.empty()) {
      j["path"] = spec.path;
    } else {
      j["n"] = spec.edge_list_n;
      json e = json::array();
      for (const auto &[u, v] : spec.edges)
        e.push_back({u + 1, v + 1});
      j["edges"] = e;
    }
    break;
  }
  return j;
}

json measure_to_json(const SpectralMeasure &mu) {
  json j;
  j["kind"] = to_string(mu.kind());
  j["params"] = json::object();
  if (mu.kind() == MeasureKind::torus_limit || mu.kind() == MeasureKind::kesten_mckay)
    j["params"]["d"] = mu.param();
  if (mu.kind() == MeasureKind::discrete) {
    json atoms = json::array();
    for (Eigen::Index k = 0; k < mu.nodes().size(); ++k)
      atoms.push_back({{"value", mu.nodes()(k)}, {"weight", mu.weights()(k)}});
    j["atoms"] = atoms;
  }
  return j;
}

json law_to_json(const GaussianLaw &law) {
  return {{"mean", std::vector<double>(law.mean.data(), law.mean.data() + law.mean.size())},
          {"cov_eigenvalues",
           std::vector<double>(law.cov_eigenvalues.data(),
                               law.cov_eigenvalues.data() + law.cov_eigenvalues.size())}};
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void write_csv(std::ostream &out, const json &config, const std::vector<std::string> &header,
               const std::vector<std::vector<double>> &rows) {
  out << "# config: " << config.dump() << '\n';
  for (std::size_t k = 0; k < header.size(); ++k)
    out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto &r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k)
      out << (k ? "," : "") << format_number(r[k]);
    out << '\n';
  }
}

std::size_t CsvTable::column(const std::string &name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name)
      return k;
  throw ParameterError("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string &name) const {
  const std::size_t k = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto &r : rows)
    out.push_back(r.at(k));
  return out;
}

CsvTable read_csv(std::istream &in) {
  CsvTable t;
  std::string line;
  const std::string tag = "# config: ";
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    if (line[0] == '#') {
      if (line.rfind(tag, 0) == 0)
        t.config = json::parse(line.substr(tag.size()));
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ','))
      cells.push_back(cell);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto &c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception &) {
        throw ParameterError("CSV: bad number '" + c + "'");
      }
    }
    if (row.size() != t.header.size())
      throw ParameterError("CSV: row width does not match header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace lqg
