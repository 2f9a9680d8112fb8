#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lqgraph/cooperative.hpp"
#include "lqgraph/equilibrium.hpp"
#include "lqgraph/errors.hpp"
#include "lqgraph/flow.hpp"
#include "lqgraph/graph.hpp"
#include "lqgraph/io.hpp"
#include "lqgraph/montecarlo.hpp"
#include "lqgraph/spectral.hpp"
#include "lqgraph/strategy.hpp"

namespace lqg::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string graph;
  json graph_json; // set when the config file gives an object spec
  std::string measure;
  double c = 1.0;
  double T = 1.0;
  double sigma = 1.0;
  int steps = kDefaultSteps;
  int paths = 10000;
  double dt = 0.0; // 0 means T/500
  std::uint64_t seed = 0;
  std::string out;
  std::optional<double> t;
  std::string t_grid;
  std::string profile = "equilibrium";
  std::string dump;
};

template <class T> void read_key(const json &j, const char *key, T &dst) {
  if (j.contains(key))
    dst = j.at(key).get<T>();
}

void apply_config_file(const std::string &path, RunConfig &cfg) {
  std::ifstream in(path);
  if (!in)
    throw ParameterError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
    if (!j.is_object())
      throw ParameterError("config file must hold a JSON object");
    if (j.contains("graph")) {
      if (j["graph"].is_object()) {
        cfg.graph_json = j["graph"];
        cfg.graph.clear();
      } else {
        cfg.graph = j["graph"].get<std::string>();
      }
    }
    read_key(j, "measure", cfg.measure);
    read_key(j, "c", cfg.c);
    read_key(j, "T", cfg.T);
    read_key(j, "sigma", cfg.sigma);
    read_key(j, "steps", cfg.steps);
    read_key(j, "paths", cfg.paths);
    read_key(j, "dt", cfg.dt);
    read_key(j, "seed", cfg.seed);
    read_key(j, "out", cfg.out);
    read_key(j, "t_grid", cfg.t_grid);
    read_key(j, "profile", cfg.profile);
    read_key(j, "dump", cfg.dump);
    if (j.contains("t"))
      cfg.t = j["t"].get<double>();
  } catch (const json::exception &e) {
    throw ParameterError(std::string("config file: ") + e.what());
  }
}

void validate(RunConfig &cfg) {
  auto positive = [](double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ParameterError(std::string(name) + " must be a positive number");
  };
  positive(cfg.c, "c");
  positive(cfg.T, "T");
  positive(cfg.sigma, "sigma");
  if (cfg.steps < 100)
    throw ParameterError("steps must be >= 100");
  if (cfg.steps % 2 != 0)
    ++cfg.steps;
  if (cfg.paths < 1)
    throw ParameterError("paths must be >= 1");
  if (cfg.dt == 0.0)
    cfg.dt = cfg.T / 500.0;
  positive(cfg.dt, "dt");
  if (cfg.profile != "equilibrium" && cfg.profile != "mean_field")
    throw ParameterError("profile must be 'equilibrium' or 'mean_field'");
  if (cfg.t && !(*cfg.t >= 0.0 && *cfg.t <= cfg.T))
    throw ParameterError("t must lie in [0,T]");
}

bool has_graph(const RunConfig &cfg) { return !cfg.graph.empty() || !cfg.graph_json.is_null(); }

GraphSpec graph_spec(const RunConfig &cfg) {
  if (!cfg.graph_json.is_null())
    return graph_spec_from_json(cfg.graph_json);
  if (cfg.graph.empty())
    throw ParameterError(cfg.command + " needs --graph");
  return parse_graph_spec(cfg.graph);
}

Graph graph_of(const RunConfig &cfg) { return build_graph(graph_spec(cfg)); }

SpectralMeasure measure_of(const RunConfig &cfg) {
  if (cfg.measure.empty())
    throw ParameterError(cfg.command + " needs --measure or --graph");
  return parse_measure_spec(cfg.measure);
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k)
    v[k] = count == 1 ? a : a + (b - a) * k / (count - 1);
  if (count > 1)
    v.back() = b;
  return v;
}

std::vector<double> time_grid(const RunConfig &cfg) {
  if (cfg.t)
    return {*cfg.t};
  if (cfg.t_grid.empty())
    return linspace(0.0, cfg.T, 101);
  std::vector<std::string> parts;
  std::stringstream ss(cfg.t_grid);
  std::string item;
  while (std::getline(ss, item, ':'))
    parts.push_back(item);
  try {
    std::vector<double> grid;
    if (parts.size() == 1)
      grid = linspace(0.0, cfg.T, std::stoi(parts[0]));
    else if (parts.size() == 3)
      grid = linspace(std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2]));
    else
      throw ParameterError("");
    if (grid.empty())
      throw ParameterError("");
    for (double t : grid)
      if (!(t >= 0.0 && t <= cfg.T * (1.0 + 1e-12)))
        throw ParameterError("t-grid must lie in [0,T]");
    return grid;
  } catch (const ParameterError &e) {
    if (std::string(e.what()).empty())
      throw ParameterError("t-grid must be COUNT or START:END:COUNT");
    throw;
  } catch (const std::exception &) {
    throw ParameterError("t-grid must be COUNT or START:END:COUNT");
  }
}

json config_json(const RunConfig &cfg) {
  json j;
  j["command"] = cfg.command;
  if (has_graph(cfg))
    j["graph"] = graph_spec_to_json(graph_spec(cfg));
  if (!cfg.measure.empty())
    j["measure"] = cfg.measure;
  j["c"] = cfg.c;
  j["T"] = cfg.T;
  j["sigma"] = cfg.sigma;
  j["steps"] = cfg.steps;
  j["paths"] = cfg.paths;
  j["dt"] = cfg.dt;
  j["seed"] = cfg.seed;
  if (cfg.t)
    j["t"] = *cfg.t;
  if (!cfg.t_grid.empty())
    j["t_grid"] = cfg.t_grid;
  j["profile"] = cfg.profile;
  return j;
}

class Sink {
public:
  Sink(const RunConfig &cfg, std::ostream &fallback) : stream_(&fallback) {
    if (!cfg.out.empty()) {
      file_.open(cfg.out);
      if (!file_)
        throw ParameterError("cannot open output '" + cfg.out + "'");
      stream_ = &file_;
    }
  }
  std::ostream &get() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream *stream_;
};

using Rows = std::vector<std::vector<double>>;

void emit_csv(const RunConfig &cfg, std::ostream &out, const std::vector<std::string> &header,
              const Rows &rows) {
  Sink sink(cfg, out);
  write_csv(sink.get(), config_json(cfg), header, rows);
}

void emit_json(const RunConfig &cfg, std::ostream &out, json body) {
  body["config"] = config_json(cfg);
  Sink sink(cfg, out);
  sink.get() << body.dump(2) << '\n';
}

void cmd_spectrum(const RunConfig &cfg, std::ostream &out) {
  const EigenSystem es = laplacian_eigensystem(graph_of(cfg), false);
  Rows rows;
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    rows.push_back({static_cast<double>(k + 1), es.values(k)});
  emit_csv(cfg, out, {"index", "eigenvalue"}, rows);
}

SpectralMeasure measure_from(const RunConfig &cfg) {
  return has_graph(cfg) ? empirical_measure(graph_of(cfg)) : measure_of(cfg);
}

void cmd_solve_f(const RunConfig &cfg, std::ostream &out) {
  const FlockingSchedule s = solve_f(measure_from(cfg), cfg.c, cfg.T, cfg.steps);
  Rows rows;
  if (cfg.t || !cfg.t_grid.empty()) {
    for (double t : time_grid(cfg))
      rows.push_back({t, s.f(t)});
  } else {
    for (int k = 0; k <= s.steps(); ++k)
      rows.push_back({s.time(k), s.f_nodes()(k)});
  }
  emit_csv(cfg, out, {"t", "f"}, rows);
}

void cmd_variance_curve(const RunConfig &cfg, std::ostream &out) {
  Rows rows;
  if (has_graph(cfg)) {
    const EquilibriumKernel k = build_kernel(graph_of(cfg), cfg.c, cfg.T, cfg.sigma, cfg.steps);
    for (double t : time_grid(cfg))
      rows.push_back({t, player_variance(k, t)});
  } else {
    const SpectralMeasure mu = measure_of(cfg);
    const FlockingSchedule s = solve_f(mu, cfg.c, cfg.T, cfg.steps);
    for (double t : time_grid(cfg))
      rows.push_back({t, limit_variance(mu, s, cfg.sigma, t)});
  }
  emit_csv(cfg, out, {"t", "value"}, rows);
}

void cmd_value(const RunConfig &cfg, std::ostream &out) {
  json body;
  if (has_graph(cfg)) {
    const Graph g = graph_of(cfg);
    const EquilibriumKernel k = build_kernel(g, cfg.c, cfg.T, cfg.sigma, cfg.steps);
    body["value"] = game_value(k);
    body["spectral_identity"] = game_value_spectral(k);
    body["cooperative_value"] = coop_value(coop_kernel(g, cfg.c, cfg.T, cfg.sigma, cfg.steps));
    body["n"] = g.n();
  } else {
    const SpectralMeasure mu = measure_of(cfg);
    const FlockingSchedule s = solve_f(mu, cfg.c, cfg.T, cfg.steps);
    body["value"] = limit_value(mu, s, cfg.sigma);
    body["cooperative_value"] = coop_limit_value(mu, cfg.c, cfg.T, cfg.sigma);
    body["measure"] = measure_to_json(mu);
  }
  emit_json(cfg, out, body);
}

std::string label(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void cmd_fig1(const RunConfig &cfg, std::ostream &out) {
  const std::vector<double> cs = {0.5, 1.0, 2.0, 5.0};
  const std::vector<double> grid = time_grid(cfg);
  std::vector<std::string> header = {"t"};
  std::vector<std::vector<double>> cols;
  const SpectralMeasure dense = dirac_minus_one(), cyc = cycle_limit();
  for (double c : cs) {
    for (const auto *mu : {&dense, &cyc}) {
      header.push_back((mu == &dense ? "dense_c" : "cycle_c") + label(c));
      const FlockingSchedule s = solve_f(*mu, c, cfg.T, cfg.steps);
      std::vector<double> col;
      for (double t : grid)
        col.push_back(limit_variance(*mu, s, cfg.sigma, t));
      cols.push_back(std::move(col));
    }
  }
  Rows rows;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    std::vector<double> row = {grid[r]};
    for (const auto &col : cols)
      row.push_back(col[r]);
    rows.push_back(std::move(row));
  }
  emit_csv(cfg, out, header, rows);
}

void cmd_fig2(const RunConfig &cfg, std::ostream &out) {
  const std::vector<double> grid = time_grid(cfg);
  std::vector<std::pair<std::string, SpectralMeasure>> series = {
      {"torus_d1", torus_limit(1)},
      {"torus_d2", torus_limit(2)},
      {"torus_d4", torus_limit(4)},
      {"dense", dirac_minus_one()}};
  std::vector<std::string> header = {"t"};
  std::vector<std::vector<double>> cols;
  for (const auto &[name, mu] : series) {
    header.push_back(name);
    const FlockingSchedule s = solve_f(mu, cfg.c, cfg.T, cfg.steps);
    std::vector<double> col;
    for (double t : grid)
      col.push_back(limit_variance(mu, s, cfg.sigma, t));
    cols.push_back(std::move(col));
  }
  Rows rows;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    std::vector<double> row = {grid[r]};
    for (const auto &col : cols)
      row.push_back(col[r]);
    rows.push_back(std::move(row));
  }
  emit_csv(cfg, out, header, rows);
}

void cmd_fig3(const RunConfig &cfg, std::ostream &out) {
  const std::vector<double> grid = time_grid(cfg);
  Rows rows;
  if (has_graph(cfg)) {
    const Graph g = graph_of(cfg);
    const EquilibriumKernel k = build_kernel(g, cfg.c, cfg.T, cfg.sigma, cfg.steps);
    const CoopKernel ck = coop_kernel(g, cfg.c, cfg.T, cfg.sigma, cfg.steps);
    for (double t : grid)
      rows.push_back({t, player_variance(k, t), coop_variance(ck, t)});
  } else {
    const SpectralMeasure mu = cfg.measure.empty() ? cycle_limit() : measure_of(cfg);
    const FlockingSchedule s = solve_f(mu, cfg.c, cfg.T, cfg.steps);
    for (double t : grid)
      rows.push_back({t, limit_variance(mu, s, cfg.sigma, t),
                      coop_limit_variance(mu, cfg.c, cfg.T, cfg.sigma, t, cfg.steps)});
  }
  emit_csv(cfg, out, {"t", "competitive", "cooperative"}, rows);
}

void cmd_coop(const RunConfig &cfg, std::ostream &out) {
  const std::vector<double> grid = time_grid(cfg);
  Rows rows;
  if (has_graph(cfg)) {
    const CoopKernel ck = coop_kernel(graph_of(cfg), cfg.c, cfg.T, cfg.sigma, cfg.steps);
    for (double t : grid)
      rows.push_back({t, coop_variance(ck, t)});
  } else {
    const SpectralMeasure mu = measure_of(cfg);
    for (double t : grid)
      rows.push_back({t, coop_limit_variance(mu, cfg.c, cfg.T, cfg.sigma, t, cfg.steps)});
  }
  emit_csv(cfg, out, {"t", "value"}, rows);
}

LinearProfile profile_of(const RunConfig &cfg, const Graph &g) {
  if (cfg.profile == "mean_field")
    return mf_profile(g, cfg.c, cfg.T, cfg.steps);
  return equilibrium_profile(build_kernel(g, cfg.c, cfg.T, cfg.sigma, cfg.steps));
}

void cmd_nash_audit(const RunConfig &cfg, std::ostream &out) {
  const Graph g = graph_of(cfg);
  const LinearProfile prof = profile_of(cfg, g);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(g.n());
  const bool mf = cfg.profile == "mean_field";
  const EpsilonBounds eps = epsilon_bounds(g, cfg.c, cfg.T, cfg.sigma);
  const Eigen::VectorXd bound = mf ? eps.per_vertex : Eigen::VectorXd::Zero(g.n());
  const double tol = mf ? 1e-8 : 1e-5;
  const auto entries = audit_profile(g, prof, cfg.c, cfg.sigma, x0, bound, tol);
  json verts = json::array();
  bool all = true;
  for (const auto &e : entries) {
    verts.push_back({{"vertex", e.vertex + 1},
                     {"cost", e.cost},
                     {"best_response_value", e.best_response_value},
                     {"gap", e.gap},
                     {"epsilon_bound", e.epsilon_bound},
                     {"satisfied", e.satisfied}});
    all = all && e.satisfied;
  }
  json body = {{"profile", cfg.profile},
               {"tolerance", tol},
               {"epsilon_aggregate", eps.aggregate},
               {"averaged_degree_diagnostic", eps.averaged_degree_diagnostic},
               {"all_satisfied", all},
               {"vertices", verts}};
  emit_json(cfg, out, body);
}

void cmd_simulate(const RunConfig &cfg, std::ostream &out) {
  const Graph g = graph_of(cfg);
  const bool eq = cfg.profile == "equilibrium";
  std::optional<EquilibriumKernel> kernel;
  if (eq)
    kernel = build_kernel(g, cfg.c, cfg.T, cfg.sigma, cfg.steps);
  const LinearProfile prof =
      eq ? equilibrium_profile(*kernel) : mf_profile(g, cfg.c, cfg.T, cfg.steps);
  SimConfig sc;
  sc.n_paths = cfg.paths;
  sc.dt = cfg.dt;
  sc.seed = cfg.seed;
  sc.record_times = (cfg.t || !cfg.t_grid.empty()) ? time_grid(cfg) : std::vector<double>{cfg.T};
  const PathEnsemble e = simulate(g, prof, cfg.sigma, sc);
  json times = json::array();
  for (double t : e.times) {
    const EnsembleStats st = ensemble_stats(e, t);
    json item = {{"t", t},
                 {"mean", std::vector<double>(st.mean.data(), st.mean.data() + st.mean.size())},
                 {"variance", std::vector<double>(st.variance.data(),
                                                  st.variance.data() + st.variance.size())},
                 {"pooled_variance", st.pooled_variance},
                 {"pooled_variance_se", st.pooled_variance_se}};
    if (kernel)
      item["analytic_player_variance"] = player_variance(*kernel, t);
    else
      item["analytic_player_variance"] = dense_limit_variance(cfg.c, cfg.T, cfg.sigma, t);
    times.push_back(item);
  }
  if (!cfg.dump.empty()) {
    std::ofstream raw(cfg.dump);
    if (!raw)
      throw ParameterError("cannot open dump file '" + cfg.dump + "'");
    raw << "path,player,t,x\n";
    for (std::size_t r = 0; r < e.times.size(); ++r)
      for (Eigen::Index p = 0; p < e.states[r].rows(); ++p)
        for (Eigen::Index v = 0; v < e.states[r].cols(); ++v)
          raw << p << ',' << v + 1 << ',' << format_number(e.times[r]) << ','
              << format_number(e.states[r](p, v)) << '\n';
  }
  emit_json(cfg, out, {{"profile", cfg.profile}, {"n", g.n()}, {"records", times}});
}

void diagnostic(std::ostream &err, const char *kind, const std::string &msg) {
  std::string flat = msg;
  for (char &ch : flat)
    if (ch == '\n')
      ch = ' ';
  err << "error: kind=" << kind << " message=" << json(flat).dump() << '\n';
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  std::string config_path;
  CLI::App app{"LQ flocking games on graphs: equilibria, limits, audits, simulation"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, std::function<void(const RunConfig &, std::ostream &)>>>
      commands = {
          {"spectrum", {"Laplacian eigenvalues (CSV index,eigenvalue)", cmd_spectrum}},
          {"solve-f", {"flocking schedule f (CSV t,f)", cmd_solve_f}},
          {"variance-curve", {"player variance curve (CSV t,value)", cmd_variance_curve}},
          {"value", {"game value (JSON)", cmd_value}},
          {"fig1", {"dense vs cycle variance for c in {0.5,1,2,5}", cmd_fig1}},
          {"fig2", {"torus d in {1,2,4} vs dense variance", cmd_fig2}},
          {"fig3", {"competitive vs cooperative variance", cmd_fig3}},
          {"nash-audit", {"per-vertex deviation audit (JSON)", cmd_nash_audit}},
          {"simulate", {"Monte Carlo ensemble summary (JSON)", cmd_simulate}},
          {"coop", {"cooperative variance curve (CSV t,value)", cmd_coop}},
      };
  std::optional<double> t_flag;
  for (const auto &[name, entry] : commands) {
    CLI::App *sub = app.add_subcommand(name, entry.first);
    sub->add_option("--graph", cfg.graph, "graph spec KIND:ARGS");
    sub->add_option("--measure", cfg.measure, "limit measure dirac|cycle|torus:D|km:D");
    sub->add_option("--c", cfg.c, "terminal cost weight");
    sub->add_option("--T", cfg.T, "horizon");
    sub->add_option("--sigma", cfg.sigma, "noise level");
    sub->add_option("--steps", cfg.steps, "ODE grid steps");
    sub->add_option("--paths", cfg.paths, "Monte Carlo paths");
    sub->add_option("--dt", cfg.dt, "Euler step (default T/500)");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--t", t_flag, "single evaluation time");
    sub->add_option("--t-grid", cfg.t_grid, "COUNT or START:END:COUNT");
    sub->add_option("--profile", cfg.profile, "equilibrium|mean_field");
    sub->add_option("--dump", cfg.dump, "raw sample CSV path (simulate)");
    sub->add_option("--config", config_path, "JSON config overriding flags");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    diagnostic(err, "parameter", e.what());
    return 1;
  }

  try {
    cfg.t = t_flag;
    if (!config_path.empty())
      apply_config_file(config_path, cfg);
    validate(cfg);
    commands.at(cfg.command).second(cfg, out);
    return 0;
  } catch (const ParameterError &e) {
    diagnostic(err, "parameter", e.what());
    return 1;
  } catch (const json::exception &e) {
    diagnostic(err, "parameter", e.what());
    return 1;
  } catch (const DomainError &e) {
    diagnostic(err, "domain", e.what());
    return 2;
  } catch (const GenerationError &e) {
    diagnostic(err, "generation", e.what());
    return 3;
  } catch (const NumericError &e) {
    diagnostic(err, "numeric", e.what());
    return 3;
  } catch (const std::exception &e) {
    diagnostic(err, "numeric", e.what());
    return 3;
  }
}

} // namespace lqg::cli
