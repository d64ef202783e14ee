#include "netred/app/experiment.hpp"

#include <cmath>

#include "netred/errors.hpp"
#include "netred/evaluation.hpp"
#include "netred/reduction.hpp"

namespace netred::app {

Instance build_instance(const ExperimentConfig& config, std::uint64_t seed, int scale) {
  WsbmParams params = scale == 1 ? config.wsbm : config.wsbm.scaled(scale);
  Matrix l = config.graph == "expected" ? expected_laplacian(params).l_blk
                                        : laplacian(sample_adjacency(params, seed));
  std::vector<RationalTF> nodes;
  if (config.nodes.preset == "explicit") {
    if (scale != 1) throw Error(ErrorCode::ConfigError, "nodes: explicit node lists cannot be scaled");
    nodes = config.nodes.explicit_nodes;
  } else {
    Rng rng(seed, streams::nodes);
    nodes = sample_swing_nodes(params.n(), config.nodes.prior, rng);
  }
  NetworkModel model(std::move(nodes), config.coupling, std::move(l));
  return Instance{std::move(params), std::move(model)};
}

TrendRow run_trend_seed(const ExperimentConfig& config, int scale, std::uint64_t seed) {
  TrendRow row;
  row.scale = scale;
  row.seed = seed;
  try {
    const Instance inst = build_instance(config, seed, scale);
    row.n = inst.model.size();
    row.concentration = symmetric_spectral_norm(inst.model.laplacian() - expected_laplacian(inst.params).l_blk);
    const ReductionOutput red = reduce_network(inst.model, config.k, seed, config.restarts);
    row.lambda_next = red.diagnostics.lambda_next;
    row.exact_recovery = same_partition(red.reduced.partition, inst.params.partition());
    const ErrorReport report = band_error(inst.model, red.reduced, red.spectral, config.grid(), {false});
    row.sup_err = report.sup_err;
    row.ok = report.failures == 0;
    if (!row.ok) row.failure = std::to_string(report.failures) + " grid points failed";
  } catch (const Error& e) {
    row.ok = false;
    row.failure = e.what();
  }
  return row;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "need >= 2 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace netred::app
