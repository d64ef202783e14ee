#include <chrono>
#include <cstdio>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "netred/app/commands.hpp"
#include "netred/app/config.hpp"
#include "netred/errors.hpp"

namespace {

bool is_validation(netred::ErrorCode code) {
  using netred::ErrorCode;
  return code == ErrorCode::ConfigError || code == ErrorCode::InvalidArgument || code == ErrorCode::IoError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving network reduction via spectral clustering"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = "out";
  long long seed = -1;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const char* names[] = {"generate", "reduce", "evaluate", "simulate", "experiment"};
  const char* help[] = {
      "sample Laplacians and node dynamics per seed",
      "run the reduction pipeline and write the reduced model",
      "band errors, rank-k bound and H-infinity grid estimates",
      "step responses of the full and reduced closed loops",
      "Monte-Carlo trend and concentration study over seeds and sizes",
  };
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "run this single seed instead of the config's list")->check(CLI::NonNegativeNumber);
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  netred::app::ExperimentConfig config;
  try {
    config = netred::app::load_config(config_path);
    if (seed >= 0) config.seeds = {static_cast<std::uint64_t>(seed)};
  } catch (const netred::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const std::string summary = netred::app::run_command(command, config, {out_dir, jobs});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s (%.2f s)\n", summary.c_str(), secs);
  } catch (const netred::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_validation(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
