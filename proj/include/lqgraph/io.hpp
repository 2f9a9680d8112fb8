#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lqgraph/equilibrium.hpp"
#include "lqgraph/graph.hpp"
#include "lqgraph/spectral.hpp"

namespace lqg {

using json = nlohmann::json;

/// {"kind": "...", ...}; edge lists carry "path" or inline 1-based "edges".
GraphSpec graph_spec_from_json(const json &j);
json graph_spec_to_json(const GraphSpec &spec);

/// {kind, params, atoms?: [{value, weight}]}; atoms only for discrete measures.
json measure_to_json(const SpectralMeasure &mu);
/// {mean: [...], cov_eigenvalues: [...]}.
json law_to_json(const GaussianLaw &law);

/// 15 significant digits, '.' decimal.
std::string format_number(double x);

/// "# config: {...}" line, header row, then rows.
void write_csv(std::ostream &out, const json &config, const std::vector<std::string> &header,
               const std::vector<std::vector<double>> &rows);

struct CsvTable {
  json config;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by name; throws ParameterError when absent.
  std::size_t column(const std::string &name) const;
  std::vector<double> values(const std::string &name) const;
};

CsvTable read_csv(std::istream &in);

} // namespace lqg
