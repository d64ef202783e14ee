#include "netred/app/commands.hpp"

#include <cmath>
#include <cstdio>

#include "netred/app/experiment.hpp"
#include "netred/app/io.hpp"
#include "netred/errors.hpp"
#include "netred/evaluation.hpp"
#include "netred/simulate.hpp"

namespace netred::app {

using nlohmann::json;

namespace {

using Records = std::vector<FileRecord>;

std::string seed_dir(std::uint64_t seed) { return "seed_" + std::to_string(seed) + "/"; }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Keeps JSON output free of non-finite numbers, which JSON cannot encode.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Records cmd_generate(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& root) {
  const Instance inst = build_instance(cfg, seed);
  const std::string dir = seed_dir(seed);
  Records out;
  out.push_back(write_output(root, dir + "laplacian.csv", matrix_csv(inst.model.laplacian())));
  json nodes = json::array();
  for (const auto& g : inst.model.nodes()) nodes.push_back(to_json(g));
  out.push_back(write_output(root, dir + "nodes.json", dump_json(json{{"nodes", nodes}, {"coupling", to_json(inst.model.coupling())}})));
  return out;
}

json diagnostics_json(const ReductionOutput& red, const Instance& inst) {
  const auto matching = match_labels(red.reduced.partition, inst.params.partition());
  return json{{"lambda_next", red.diagnostics.lambda_next},
              {"refinement_residual", red.diagnostics.refinement_residual},
              {"within_ss", red.diagnostics.within_ss},
              {"tied_spectrum", red.diagnostics.tied_spectrum},
              {"refinement_non_unique", red.diagnostics.refinement_non_unique},
              {"exact_recovery", same_partition(red.reduced.partition, inst.params.partition())},
              {"agreements_with_true_partition", matching.agreements}};
}

Records cmd_reduce(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& root) {
  const Instance inst = build_instance(cfg, seed);
  const ReductionOutput red = reduce_network(inst.model, cfg.k, seed, cfg.restarts);
  json doc = reduced_model_json(red.reduced);
  doc["seed"] = seed;
  doc["diagnostics"] = diagnostics_json(red, inst);
  return {write_output(root, seed_dir(seed) + "reduced.json", dump_json(doc))};
}

Records cmd_evaluate(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& root) {
  const Instance inst = build_instance(cfg, seed);
  const ReductionOutput red = reduce_network(inst.model, cfg.k, seed, cfg.restarts);
  const FreqGrid grid = cfg.grid();
  const ErrorReport report = band_error(inst.model, red.reduced, red.spectral, grid);

  std::string csv = "omega,err_yu_hatk,err_yu_tk,theorem1_bound,feasible\n";
  int feasible = 0;
  for (const auto& p : report.per_freq) {
    feasible += p.feasible;
    csv += format_number(p.omega) + ',' + (p.ok ? format_number(p.err_yu_hatk) : "nan") + ',' +
           (p.err_yu_tk ? format_number(*p.err_yu_tk) : "nan") + ',' +
           (p.bound ? format_number(*p.bound) : "nan") + ',' + (p.feasible ? "1" : "0") + '\n';
  }

  json summary{{"seed", seed},
               {"band_note", "grid covers [omega_min, eta]; |omega| < omega_min is excluded because the coupling may have a pole at s = 0"},
               {"omega_min", grid.omega_min},
               {"eta", grid.eta},
               {"grid_size", grid.points.size()},
               {"sup_err", report.sup_err},
               {"sup_err_tk_hatk", report.sup_err_tk_hatk},
               {"bound_satisfied", report.bound_satisfied},
               {"feasible_points", feasible},
               {"failed_points", report.failures},
               {"hinf_full", hinf_grid(inst.model, grid)},
               {"hinf_reduced", hinf_grid(red.reduced, grid)},
               {"diagnostics", diagnostics_json(red, inst)}};
  try {
    const PassivityReport pr = passivity_check(inst.model, grid.eta, static_cast<int>(grid.points.size()), grid.omega_min);
    summary["passivity"] = json{{"gamma", pr.gamma}, {"m_eta", pr.m_eta}, {"f_lower", pr.f_lower},
                                {"coupling_axis_imag", pr.coupling_axis_imag}};
  } catch (const Error& e) {
    summary["passivity"] = json{{"error", e.what()}};
  }
  const std::string dir = seed_dir(seed);
  return {write_output(root, dir + "band.csv", csv), write_output(root, dir + "summary.json", dump_json(summary))};
}

std::string sim_csv(const SimResult& r, int every) {
  std::string out = "t";
  for (Index j = 0; j < r.outputs.cols(); ++j) out += ",y" + std::to_string(j);
  out += '\n';
  for (Index t = 0; t < r.outputs.rows(); t += every) {
    out += format_number(r.times[static_cast<std::size_t>(t)]);
    for (Index j = 0; j < r.outputs.cols(); ++j) out += ',' + format_number(r.outputs(t, j));
    out += '\n';
  }
  return out;
}

Records cmd_simulate(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& root) {
  const Instance inst = build_instance(cfg, seed);
  const ReductionOutput red = reduce_network(inst.model, cfg.k, seed, cfg.restarts);
  const SimResult full = step_response(full_closed_loop(inst.model), cfg.sim.input_node, cfg.sim.t_end, cfg.sim.dt);
  const SimResult reduced = step_response(reduced_closed_loop(red.reduced), cfg.sim.input_node, cfg.sim.t_end, cfg.sim.dt);
  const ResponseComparison cmp = compare_responses(full, reduced, red.reduced.partition);

  std::string groups = "group,size,max_member_error,spread\n";
  for (const auto& g : cmp.groups) {
    groups += std::to_string(g.group) + ',' +
              std::to_string(red.reduced.partition.block_sizes()[static_cast<std::size_t>(g.group)]) + ',' +
              format_number(g.max_member_error) + ',' + format_number(g.spread) + '\n';
  }
  json node_errors = json::array();
  for (double e : cmp.node_errors) node_errors.push_back(number_or_null(e));
  json summary{{"seed", seed},
               {"input", full.input_spec},
               {"dt", cfg.sim.dt},
               {"t_end", cfg.sim.t_end},
               {"max_node_error", number_or_null(cmp.max_node_error)},
               {"median_node_error", number_or_null(median(cmp.node_errors))},
               {"min_group_separation", number_or_null(cmp.min_group_separation)},
               {"node_errors", node_errors},
               {"partition", red.reduced.partition.assignment()}};
  const std::string dir = seed_dir(seed);
  return {write_output(root, dir + "full.csv", sim_csv(full, cfg.sim.output_every)),
          write_output(root, dir + "reduced.csv", sim_csv(reduced, cfg.sim.output_every)),
          write_output(root, dir + "groups.csv", groups),
          write_output(root, dir + "summary.json", dump_json(summary))};
}

struct ExperimentOutcome {
  Records records;
  std::string line;
};

ExperimentOutcome cmd_experiment(const ExperimentConfig& cfg, const std::string& root, int jobs) {
  struct Task {
    int scale;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int scale : cfg.scales) {
    for (auto seed : cfg.seeds) tasks.push_back({scale, seed});
  }
  const auto rows = parallel_map<TrendRow>(tasks.size(), jobs, [&](std::size_t i) {
    return run_trend_seed(cfg, tasks[i].scale, tasks[i].seed);
  });

  std::string csv = "scale,n,seed,ok,exact_recovery,sup_err,concentration,lambda_next,failure\n";
  for (const auto& r : rows) {
    std::string failure = r.failure;
    for (char& c : failure) if (c == ',' || c == '\n') c = ';';
    csv += std::to_string(r.scale) + ',' + std::to_string(r.n) + ',' + std::to_string(r.seed) + ',' +
           (r.ok ? "1" : "0") + ',' + (r.exact_recovery ? "1" : "0") + ',' + format_number(r.sup_err) + ',' +
           format_number(r.concentration) + ',' + format_number(r.lambda_next) + ',' + failure + '\n';
  }

  json per_scale = json::array();
  for (int scale : cfg.scales) {
    std::vector<double> errs;
    int exact = 0, total = 0;
    for (const auto& r : rows) {
      if (r.scale != scale) continue;
      ++total;
      exact += r.exact_recovery;
      if (r.ok) errs.push_back(r.sup_err);
    }
    per_scale.push_back(json{{"scale", scale},
                             {"n", cfg.wsbm.scaled(scale).n()},
                             {"seeds", total},
                             {"successful", errs.size()},
                             {"median_sup_err", number_or_null(median(errs))},
                             {"recovery_rate", total ? static_cast<double>(exact) / total : 0.0}});
  }

  // Concentration of L around its expectation over a wider range of sizes.
  struct ConcTask {
    int scale;
    std::uint64_t seed;
  };
  std::vector<ConcTask> conc_tasks;
  for (int scale : cfg.concentration_scales) {
    for (auto seed : cfg.seeds) conc_tasks.push_back({scale, seed});
  }
  const auto conc = parallel_map<double>(conc_tasks.size(), jobs, [&](std::size_t i) {
    const WsbmParams params = cfg.wsbm.scaled(conc_tasks[i].scale);
    const std::uint64_t seed = conc_tasks[i].seed;
    return concentration_stat(params, std::span<const std::uint64_t>(&seed, 1)).front();
  });
  std::string conc_csv = "scale,n,seed,norm_l_minus_lblk\n";
  std::vector<double> ns, medians;
  json conc_summary = json::array();
  for (int scale : cfg.concentration_scales) {
    const Index n = cfg.wsbm.scaled(scale).n();
    std::vector<double> vals;
    for (std::size_t i = 0; i < conc_tasks.size(); ++i) {
      if (conc_tasks[i].scale != scale) continue;
      vals.push_back(conc[i]);
      conc_csv += std::to_string(scale) + ',' + std::to_string(n) + ',' + std::to_string(conc_tasks[i].seed) + ',' +
                  format_number(conc[i]) + '\n';
    }
    const double med = median(vals);
    ns.push_back(static_cast<double>(n));
    medians.push_back(med);
    conc_summary.push_back(json{{"scale", scale}, {"n", n}, {"median", med}});
  }
  json summary{{"trend", per_scale}, {"concentration", conc_summary}};
  bool positive = true;
  for (double m : medians) positive = positive && m > 0.0;
  summary["concentration_exponent"] =
      ns.size() >= 2 && positive ? number_or_null(loglog_slope(ns, medians)) : json(nullptr);

  ExperimentOutcome out;
  out.records = {write_output(root, "trend.csv", csv), write_output(root, "concentration.csv", conc_csv),
                 write_output(root, "summary.json", dump_json(summary))};
  out.line = std::to_string(rows.size()) + " trend runs, " + std::to_string(conc.size()) + " concentration draws";
  return out;
}

}  // namespace

json reduced_model_json(const ReducedModel& reduced) {
  json aggregates = json::array();
  for (const auto& agg : reduced.aggregates) {
    json members = json::array();
    for (const auto& g : agg.members()) members.push_back(to_json(g));
    aggregates.push_back(json{{"members", members}, {"rational", to_json(agg.to_rational())}});
  }
  return json{{"k", reduced.k()},
              {"n", reduced.n()},
              {"partition", reduced.partition.assignment()},
              {"block_sizes", reduced.partition.block_sizes()},
              {"lambda_k", vector_json(reduced.lambda_k)},
              {"l_k", matrix_json(reduced.l_k)},
              {"s_matrix", matrix_json(reduced.s_matrix)},
              {"coupling", to_json(reduced.coupling)},
              {"aggregates", aggregates}};
}

std::string run_command(const std::string& name, const ExperimentConfig& config, const CommandOptions& options) {
  using SeedCommand = Records (*)(const ExperimentConfig&, std::uint64_t, const std::string&);
  SeedCommand per_seed = nullptr;
  if (name == "generate") per_seed = cmd_generate;
  else if (name == "reduce") per_seed = cmd_reduce;
  else if (name == "evaluate") per_seed = cmd_evaluate;
  else if (name == "simulate") per_seed = cmd_simulate;
  else if (name != "experiment") throw Error(ErrorCode::InvalidArgument, "unknown command '" + name + "'");

  Records records;
  std::string line;
  if (per_seed) {
    const auto per = parallel_map<Records>(config.seeds.size(), options.jobs, [&](std::size_t i) {
      return per_seed(config, config.seeds[i], options.out_dir);
    });
    for (const auto& r : per) records.insert(records.end(), r.begin(), r.end());
    line = std::to_string(config.seeds.size()) + " seed(s)";
  } else {
    ExperimentOutcome outcome = cmd_experiment(config, options.out_dir, options.jobs);
    records = std::move(outcome.records);
    line = outcome.line;
  }

  const json cfg_json = to_json(config);
  json files = json::array();
  for (const auto& r : records) files.push_back(json{{"path", r.path}, {"fnv1a64", r.hash}, {"bytes", r.bytes}});
  const json manifest{{"command", name},
                      {"config", cfg_json},
                      {"config_hash", hex64(fnv1a64(cfg_json.dump()))},
                      {"k", config.k},
                      {"sizes", config.wsbm.sizes},
                      {"seeds", config.seeds},
                      {"files", files}};
  write_output(options.out_dir, "manifest.json", dump_json(manifest));
  return name + ": " + line + ", " + std::to_string(records.size()) + " file(s) in " + options.out_dir;
}

}  // namespace netred::app
