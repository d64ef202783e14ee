#include "netred/app/config.hpp"

#include <fstream>

#include "netred/errors.hpp"

namespace netred::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::vector<double> as_doubles(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> as_ints(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_int(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a nonempty array of rows");
  const auto rows = static_cast<Index>(v.size());
  Matrix m;
  for (Index r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const auto row = as_doubles(v[static_cast<std::size_t>(r)], row_path);
    if (r == 0) m.resize(rows, static_cast<Index>(row.size()));
    if (static_cast<Index>(row.size()) != m.cols()) fail(row_path, "ragged matrix row");
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

RationalTF as_tf(const json& v, const std::string& path) {
  auto num = as_doubles(require(v, "num", path), join(path, "num"));
  auto den = as_doubles(require(v, "den", path), join(path, "den"));
  try {
    return RationalTF(std::move(num), std::move(den));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

std::pair<double, double> as_range(const json& v, const std::string& path) {
  const auto r = as_doubles(v, path);
  if (r.size() != 2 || !(r[0] <= r[1])) fail(path, "expected [lo, hi] with lo <= hi");
  return {r[0], r[1]};
}

}  // namespace

json to_json(const RationalTF& tf) { return json{{"num", tf.num()}, {"den", tf.den()}}; }

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  const json& wsbm = require(doc, "wsbm", "");
  cfg.wsbm.sizes = as_ints(require(wsbm, "sizes", "wsbm"), "wsbm.sizes");
  cfg.wsbm.q = as_matrix(require(wsbm, "q", "wsbm"), "wsbm.q");
  cfg.wsbm.w = as_matrix(require(wsbm, "w", "wsbm"), "wsbm.w");
  try {
    cfg.wsbm.validate();
  } catch (const Error& e) {
    fail("wsbm", e.what());
  }

  if (doc.contains("graph")) {
    if (!doc["graph"].is_string()) fail("graph", "expected \"sampled\" or \"expected\"");
    cfg.graph = doc["graph"].get<std::string>();
    if (cfg.graph != "sampled" && cfg.graph != "expected") fail("graph", "expected \"sampled\" or \"expected\"");
  }

  if (doc.contains("nodes")) {
    const json& nodes = doc["nodes"];
    cfg.nodes.preset = require(nodes, "preset", "nodes").is_string() ? nodes["preset"].get<std::string>() : "";
    if (cfg.nodes.preset == "swing") {
      if (nodes.contains("m")) std::tie(cfg.nodes.prior.m_lo, cfg.nodes.prior.m_hi) = as_range(nodes["m"], "nodes.m");
      if (nodes.contains("d")) std::tie(cfg.nodes.prior.d_lo, cfg.nodes.prior.d_hi) = as_range(nodes["d"], "nodes.d");
      if (!(cfg.nodes.prior.m_lo > 0.0)) fail("nodes.m", "inertia must be positive");
      if (!(cfg.nodes.prior.d_lo > 0.0)) fail("nodes.d", "damping must be positive");
    } else if (cfg.nodes.preset == "explicit") {
      const json& tfs = require(nodes, "tfs", "nodes");
      if (!tfs.is_array()) fail("nodes.tfs", "expected an array");
      for (std::size_t i = 0; i < tfs.size(); ++i) {
        cfg.nodes.explicit_nodes.push_back(as_tf(tfs[i], "nodes.tfs[" + std::to_string(i) + "]"));
      }
      if (static_cast<Index>(cfg.nodes.explicit_nodes.size()) != cfg.wsbm.n()) {
        fail("nodes.tfs", "needs one transfer function per node");
      }
    } else {
      fail("nodes.preset", "expected \"swing\" or \"explicit\"");
    }
  }

  if (doc.contains("coupling")) cfg.coupling = as_tf(doc["coupling"], "coupling");

  cfg.k = as_int(require(doc, "k", ""), "k");
  if (cfg.k < 1) fail("k", "must be >= 1");
  cfg.eta = as_double(require(doc, "eta", ""), "eta");
  cfg.omega_min = as_double(require(doc, "omega_min", ""), "omega_min");
  if (!(cfg.omega_min > 0.0)) fail("omega_min", "must be positive");
  if (!(cfg.eta > cfg.omega_min)) fail("eta", "must exceed omega_min");
  cfg.grid_size = as_int(require(doc, "grid_size", ""), "grid_size");
  if (cfg.grid_size < 2) fail("grid_size", "must be >= 2");

  const json& seeds = require(doc, "seeds", "");
  if (!seeds.is_array() || seeds.empty()) fail("seeds", "expected a nonempty array");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!seeds[i].is_number_integer() || seeds[i].get<long long>() < 0) fail("seeds[" + std::to_string(i) + "]", "expected a nonnegative integer");
    cfg.seeds.push_back(seeds[i].get<std::uint64_t>());
  }

  if (doc.contains("restarts")) {
    cfg.restarts = as_int(doc["restarts"], "restarts");
    if (cfg.restarts < 1) fail("restarts", "must be >= 1");
  }
  if (doc.contains("sim")) {
    const json& sim = doc["sim"];
    if (!sim.is_object()) fail("sim", "expected an object");
    if (sim.contains("dt")) cfg.sim.dt = as_double(sim["dt"], "sim.dt");
    if (sim.contains("t_end")) cfg.sim.t_end = as_double(sim["t_end"], "sim.t_end");
    if (sim.contains("input_node")) cfg.sim.input_node = as_int(sim["input_node"], "sim.input_node");
    if (sim.contains("output_every")) cfg.sim.output_every = as_int(sim["output_every"], "sim.output_every");
    if (cfg.sim.output_every < 1) fail("sim.output_every", "must be >= 1");
    if (!(cfg.sim.dt > 0.0)) fail("sim.dt", "must be positive");
    if (!(cfg.sim.t_end >= cfg.sim.dt)) fail("sim.t_end", "must be >= dt");
    if (cfg.sim.input_node < 0 || cfg.sim.input_node >= cfg.wsbm.n()) fail("sim.input_node", "out of range");
  }
  if (doc.contains("experiment")) {
    const json& ex = doc["experiment"];
    if (!ex.is_object()) fail("experiment", "expected an object");
    if (ex.contains("scales")) cfg.scales = as_ints(ex["scales"], "experiment.scales");
    if (ex.contains("concentration_scales")) {
      cfg.concentration_scales = as_ints(ex["concentration_scales"], "experiment.concentration_scales");
    }
    for (int s : cfg.scales) if (s < 1) fail("experiment.scales", "scales must be >= 1");
    for (int s : cfg.concentration_scales) if (s < 1) fail("experiment.concentration_scales", "scales must be >= 1");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("<root>: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["wsbm"] = json{{"sizes", cfg.wsbm.sizes}, {"q", matrix_json(cfg.wsbm.q)}, {"w", matrix_json(cfg.wsbm.w)}};
  doc["graph"] = cfg.graph;
  if (cfg.nodes.preset == "swing") {
    doc["nodes"] = json{{"preset", "swing"},
                        {"m", {cfg.nodes.prior.m_lo, cfg.nodes.prior.m_hi}},
                        {"d", {cfg.nodes.prior.d_lo, cfg.nodes.prior.d_hi}}};
  } else {
    json tfs = json::array();
    for (const auto& tf : cfg.nodes.explicit_nodes) tfs.push_back(to_json(tf));
    doc["nodes"] = json{{"preset", "explicit"}, {"tfs", tfs}};
  }
  doc["coupling"] = to_json(cfg.coupling);
  doc["k"] = cfg.k;
  doc["eta"] = cfg.eta;
  doc["omega_min"] = cfg.omega_min;
  doc["grid_size"] = cfg.grid_size;
  doc["seeds"] = cfg.seeds;
  doc["restarts"] = cfg.restarts;
  doc["sim"] = json{{"dt", cfg.sim.dt}, {"t_end", cfg.sim.t_end}, {"input_node", cfg.sim.input_node},
                    {"output_every", cfg.sim.output_every}};
  doc["experiment"] = json{{"scales", cfg.scales}, {"concentration_scales", cfg.concentration_scales}};
  return doc;
}

ExperimentConfig three_area_config() {
  ExperimentConfig cfg;
  cfg.wsbm = three_area_params();
  cfg.k = 3;
  for (std::uint64_t s = 0; s < 20; ++s) cfg.seeds.push_back(s);
  cfg.scales = {1, 2, 4};
  return cfg;
}

}  // namespace netred::app
