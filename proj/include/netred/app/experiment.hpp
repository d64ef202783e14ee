#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "netred/app/config.hpp"
#include "netred/netmodel.hpp"

namespace netred::app {

/// One network drawn from a config: WSBM graph (or its expectation) and
/// node dynamics, both determined by the seed.
struct Instance {
  WsbmParams params;
  NetworkModel model;
};

/// Block sizes multiplied by `scale`. Explicit node lists only fit scale 1.
Instance build_instance(const ExperimentConfig& config, std::uint64_t seed, int scale = 1);

struct TrendRow {
  int scale = 1;
  Index n = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;
  bool exact_recovery = false;
  double sup_err = 0.0;        ///< sup over the grid of ||T_yu - T_hat_k||
  double concentration = 0.0;  ///< ||L - L_blk||
  double lambda_next = 0.0;
};

/// Reduce one instance and measure its band error. Failures are captured in
/// the row rather than thrown.
TrendRow run_trend_seed(const ExperimentConfig& config, int scale, std::uint64_t seed);

double median(std::vector<double> values);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs fn(0..count-1) on up to `jobs` threads; results come back in index
/// order. The first exception (by index) is rethrown after all tasks finish.
template <typename R>
std::vector<R> parallel_map(std::size_t count, int jobs, const std::function<R(std::size_t)>& fn) {
  std::vector<R> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace netred::app
