#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "netred/app/commands.hpp"
#include "netred/app/config.hpp"
#include "netred/app/experiment.hpp"
#include "netred/app/io.hpp"
#include "netred/errors.hpp"

using namespace netred;
using namespace netred::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  std::ifstream in(std::string(NETRED_SOURCE_DIR) + "/configs/three_area_quick.json");
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("netred_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped configs parse and express the three-area example") {
  const ExperimentConfig cfg = load_config(std::string(NETRED_SOURCE_DIR) + "/configs/three_area.json");
  const WsbmParams ref = three_area_params();
  CHECK(cfg.wsbm.sizes == ref.sizes);
  CHECK(cfg.wsbm.q == ref.q);
  CHECK(cfg.wsbm.w == ref.w);
  CHECK(cfg.k == 3);
  CHECK(cfg.seeds.size() == 20);
  CHECK(cfg.coupling.approx_equal(integrator()));
  CHECK(cfg.sim.input_node == 1);
}

TEST_CASE("config errors name the field") {
  json doc = base_config();
  doc.erase("eta");
  CHECK(config_error(doc).find("eta") != std::string::npos);

  doc = base_config();
  doc["wsbm"]["q"][1][2] = "high";
  CHECK(config_error(doc).find("wsbm.q[1][2]") != std::string::npos);

  doc = base_config();
  doc["seeds"] = json::array();
  CHECK(config_error(doc).find("seeds") != std::string::npos);

  doc = base_config();
  doc["graph"] = "lattice";
  CHECK(config_error(doc).find("graph") != std::string::npos);

  doc = base_config();
  doc["sim"]["input_node"] = 500;
  CHECK(config_error(doc).find("sim.input_node") != std::string::npos);
}

TEST_CASE("config round trip is idempotent") {
  const ExperimentConfig first = parse_config(base_config());
  const json once = to_json(first);
  const json twice = to_json(parse_config(once));
  CHECK(once == twice);
  CHECK(once.dump() == twice.dump());
}

TEST_CASE("io helpers") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  const Matrix m = (Matrix(2, 2) << 1, 2.5, -3, 0).finished();
  CHECK(matrix_csv(m, {"a", "b"}) == "a,b\n1,2.5\n-3,0\n");
}

TEST_CASE("statistics helpers") {
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 6, 12, 24}) == doctest::Approx(1.0));
  CHECK(loglog_slope({1, 4, 16}, {2, 4, 8}) == doctest::Approx(0.5));
  const auto squares = parallel_map<int>(10, 3, [](std::size_t i) { return static_cast<int>(i * i); });
  for (int i = 0; i < 10; ++i) CHECK(squares[static_cast<std::size_t>(i)] == i * i);
}

TEST_CASE("generate writes the Laplacian and is reproducible") {
  ExperimentConfig cfg = parse_config(base_config());
  cfg.seeds = {5};
  const fs::path a = scratch("gen_a"), b = scratch("gen_b");
  run_command("generate", cfg, {a.string(), 1});
  run_command("generate", cfg, {b.string(), 2});
  const std::string lap = slurp(a / "seed_5" / "laplacian.csv");
  CHECK(std::count(lap.begin(), lap.end(), '\n') == 80);
  for (const char* f : {"seed_5/laplacian.csv", "seed_5/nodes.json", "manifest.json"}) CHECK(slurp(a / f) == slurp(b / f));
  const json manifest = json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["k"] == 3);
  CHECK(manifest["sizes"] == json::array({20, 40, 20}));
  CHECK(manifest["seeds"] == json::array({5}));

  cfg.wsbm.q.setZero();
  const fs::path z = scratch("gen_zero");
  run_command("generate", cfg, {z.string(), 1});
  const std::string zero = slurp(z / "seed_5" / "laplacian.csv");
  CHECK(zero.find_first_not_of("0,\n") == std::string::npos);
}

TEST_CASE("reduce documents") {
  ExperimentConfig cfg = parse_config(base_config());
  cfg.seeds = {0};
  const fs::path dir = scratch("reduce");
  run_command("reduce", cfg, {dir.string(), 1});
  const json doc = json::parse(slurp(dir / "seed_0" / "reduced.json"));
  CHECK(doc["aggregates"].size() == 3);
  CHECK(doc["diagnostics"]["exact_recovery"] == true);
  CHECK(doc["l_k"].size() == 3);

  cfg.k = 1;
  const fs::path one = scratch("reduce_k1");
  run_command("reduce", cfg, {one.string(), 1});
  const json single = json::parse(slurp(one / "seed_0" / "reduced.json"));
  CHECK(std::abs(single["l_k"][0][0].get<double>()) <= 1e-10);
  CHECK(single["aggregates"].size() == 1);

  const fs::path again = scratch("reduce_k1_again");
  run_command("reduce", cfg, {again.string(), 1});
  CHECK(slurp(one / "seed_0" / "reduced.json") == slurp(again / "seed_0" / "reduced.json"));

  cfg.k = 80;
  try {
    run_command("reduce", cfg, {scratch("reduce_bad").string(), 1});
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KTooLarge);
  }
}

TEST_CASE("evaluate summaries") {
  ExperimentConfig cfg = parse_config(base_config());
  cfg.seeds = {0};
  const fs::path dir = scratch("evaluate");
  run_command("evaluate", cfg, {dir.string(), 1});
  const json summary = json::parse(slurp(dir / "seed_0" / "summary.json"));
  CHECK(summary["bound_satisfied"] == true);
  CHECK(summary["hinf_full"].get<double>() <= summary["passivity"]["gamma"].get<double>() * (1 + 1e-6));
  const std::string csv = slurp(dir / "seed_0" / "band.csv");
  CHECK(csv.rfind("omega,err_yu_hatk,err_yu_tk,theorem1_bound,feasible\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == cfg.grid_size + 1);

  cfg.graph = "expected";
  const fs::path ideal = scratch("evaluate_ideal");
  run_command("evaluate", cfg, {ideal.string(), 1});
  const json ideal_summary = json::parse(slurp(ideal / "seed_0" / "summary.json"));
  CHECK(ideal_summary["sup_err_tk_hatk"].get<double>() <= 1e-7);
}

TEST_CASE("simulate outputs") {
  ExperimentConfig cfg = parse_config(base_config());
  cfg.seeds = {0};
  const fs::path dir = scratch("simulate");
  run_command("simulate", cfg, {dir.string(), 1});
  const std::string full = slurp(dir / "seed_0" / "full.csv");
  const std::string reduced = slurp(dir / "seed_0" / "reduced.csv");
  CHECK(std::count(full.begin(), full.end(), '\n') == std::count(reduced.begin(), reduced.end(), '\n'));
  CHECK(full.substr(0, full.find('\n')) == reduced.substr(0, reduced.find('\n')));
  const json summary = json::parse(slurp(dir / "seed_0" / "summary.json"));
  CHECK(summary["node_errors"].size() == 80);
  CHECK(summary["min_group_separation"].get<double>() > 0.0);

  // Identical nodes collapse to one coherent group.
  json doc = base_config();
  doc["wsbm"] = json{{"sizes", {6}}, {"q", {{1.0}}}, {"w", {{3.0}}}};
  json tfs = json::array();
  for (int i = 0; i < 6; ++i) tfs.push_back(json{{"num", {1}}, {"den", {1, 2}}});
  doc["nodes"] = json{{"preset", "explicit"}, {"tfs", tfs}};
  doc["k"] = 1;
  doc["seeds"] = json::array({0});
  const fs::path coherent = scratch("simulate_k1");
  run_command("simulate", parse_config(doc), {coherent.string(), 1});
  // The group mean of the full response equals the reduced response.
  std::istringstream full_rows(slurp(coherent / "seed_0" / "full.csv"));
  std::istringstream reduced_rows(slurp(coherent / "seed_0" / "reduced.csv"));
  std::string full_line, reduced_line;
  std::getline(full_rows, full_line);
  std::getline(reduced_rows, reduced_line);
  double worst = 0.0;
  while (std::getline(full_rows, full_line) && std::getline(reduced_rows, reduced_line)) {
    std::istringstream fl(full_line), rl(reduced_line);
    std::string cell;
    std::getline(fl, cell, ',');
    std::getline(rl, cell, ',');
    double mean = 0.0;
    for (int i = 0; i < 6; ++i) {
      std::getline(fl, cell, ',');
      mean += std::stod(cell) / 6.0;
    }
    std::getline(rl, cell, ',');
    worst = std::max(worst, std::abs(mean - std::stod(cell)));
  }
  CHECK(worst <= 1e-6);

  // Halving dt barely moves the summary errors.
  cfg.sim.dt /= 2.0;
  cfg.sim.output_every *= 2;
  const fs::path fine = scratch("simulate_fine");
  run_command("simulate", cfg, {fine.string(), 1});
  const json fine_summary = json::parse(slurp(fine / "seed_0" / "summary.json"));
  CHECK(std::abs(fine_summary["max_node_error"].get<double>() - summary["max_node_error"].get<double>()) <= 1e-3);
}

TEST_CASE("experiment tables") {
  ExperimentConfig cfg = parse_config(base_config());
  cfg.seeds = {3};
  cfg.scales = {1};
  cfg.concentration_scales = {1};
  const fs::path dir = scratch("experiment");
  run_command("experiment", cfg, {dir.string(), 1});
  const std::string trend = slurp(dir / "trend.csv");
  CHECK(std::count(trend.begin(), trend.end(), '\n') == 2);

  cfg.wsbm.q.setOnes();
  const fs::path ones = scratch("experiment_ones");
  run_command("experiment", cfg, {ones.string(), 1});
  const std::string conc = slurp(ones / "concentration.csv");
  const std::string row = conc.substr(conc.find('\n') + 1);
  CHECK(std::stod(row.substr(row.rfind(',') + 1)) <= 1e-9);

  CHECK_THROWS_AS(run_command("bogus", cfg, {dir.string(), 1}), Error);
}
