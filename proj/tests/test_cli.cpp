#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "edgeburst/run.hpp"

using namespace edgeburst;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("edgeburst_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EDGEBURST_CLI) + " " + args + " >/dev/null 2>&1";
  const int ret = std::system(cmd.c_str());
  REQUIRE(ret != -1);
  return WEXITSTATUS(ret);
}

RunConfig small_config(const fs::path& out) {
  RunConfig cfg;
  cfg.n = 16;
  cfg.s = 12;
  cfg.profile = "uniform";
  cfg.gamma = 0.8;
  cfg.out_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("simulate on a single cell writes the unit distribution") {
  const auto dir = fresh_dir("single");
  RunConfig cfg;
  cfg.n = 1;
  cfg.s = 1;
  cfg.gamma = 2.0;
  cfg.out_dir = dir.string();
  CHECK(cmd_simulate(cfg) == 0);

  const std::string csv = slurp(dir / "decay.csv");
  CHECK(first_line(csv) == "n,gamma_n,P_n");
  std::istringstream rows(csv.substr(csv.find('\n') + 1));
  std::string row;
  std::getline(rows, row);
  CHECK(row.substr(0, 4) == "1,2,");
  CHECK(std::stod(row.substr(4)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(!std::getline(rows, row));

  const json j = json::parse(slurp(dir / "metrics.json"));
  CHECK(j["p1_over_pmin"].is_null());  // ratios need s >= 2
  CHECK(j["residual"].get<double>() < 1e-9);
  CHECK(j["config"]["n"] == 1);
  CHECK(j["config"]["dt"].get<double>() > 0.0);
  CHECK(!j.contains("partial_output"));
}

TEST_CASE("repeated runs are byte-identical") {
  const auto dir = fresh_dir("det");
  const auto cfg = small_config(dir);
  CHECK(cmd_simulate(cfg) == 0);
  CHECK(cmd_spectrum(cfg) == 0);
  std::map<std::string, std::string> snapshot;
  const std::vector<std::string> names = {"decay.csv", "metrics.json",
                                          "spectrum_open.csv", "spectrum_ring.csv",
                                          "spectral.json"};
  for (const auto& name : names) snapshot[name] = slurp(dir / name);
  CHECK(cmd_simulate(cfg) == 0);
  CHECK(cmd_spectrum(cfg) == 0);
  for (const auto& name : names) CHECK(slurp(dir / name) == snapshot[name]);

  // a different output directory changes only the config echo
  const auto dir_b = fresh_dir("det_b");
  auto cfg_b = cfg;
  cfg_b.out_dir = dir_b.string();
  CHECK(cmd_simulate(cfg_b) == 0);
  CHECK(slurp(dir_b / "decay.csv") == snapshot["decay.csv"]);
  json ja = json::parse(snapshot["metrics.json"]);
  json jb = json::parse(slurp(dir_b / "metrics.json"));
  ja["config"].erase("out");
  jb["config"].erase("out");
  CHECK(ja == jb);
}

TEST_CASE("file schemas are stable") {
  const auto dir = fresh_dir("schema");
  auto cfg = small_config(dir);
  CHECK(cmd_simulate(cfg) == 0);
  CHECK(cmd_spectrum(cfg) == 0);
  SweepSpec sweep{{0.4, 0.8}, cfg};
  CHECK(cmd_sweep(sweep) == 0);

  CHECK(first_line(slurp(dir / "decay.csv")) == "n,gamma_n,P_n");
  CHECK(first_line(slurp(dir / "spectrum_open.csv")) == "re,im");
  CHECK(first_line(slurp(dir / "spectrum_ring.csv")) == "re,im");
  CHECK(first_line(slurp(dir / "sweep.csv")) ==
        "gamma,mean_A,mean_B,p1_over_pmin,p1_over_ps,edge_fraction");

  const std::string decay = slurp(dir / "decay.csv");
  CHECK(decay.find("\r") == std::string::npos);
  int rows = 0;
  for (char c : decay) rows += (c == '\n');
  CHECK(rows == cfg.n + 1);

  const json spectral = json::parse(slurp(dir / "spectral.json"));
  for (const char* key : {"imaginary_gap_open", "imaginary_gap_ring",
                          "hausdorff_distance", "mean_a_open", "mean_b_open"})
    CHECK(spectral.contains(key));
  CHECK(spectral.size() == 5);

  const json metrics = json::parse(slurp(dir / "metrics.json"));
  CHECK(metrics.size() == 6);  // four ratios + residual + config
}

TEST_CASE("single-value sweep reproduces simulate and spectrum numbers") {
  const auto dir_sweep = fresh_dir("sw");
  const auto dir_single = fresh_dir("sg");
  auto base = small_config(dir_sweep);
  base.gamma = 0.0;  // sweep value overrides
  CHECK(cmd_sweep({{0.8}, base}) == 0);

  auto cfg = small_config(dir_single);
  CHECK(cmd_simulate(cfg) == 0);
  CHECK(cmd_spectrum(cfg) == 0);

  const std::string sweep_csv = slurp(dir_sweep / "sweep.csv");
  std::istringstream rows(sweep_csv.substr(sweep_csv.find('\n') + 1));
  std::string cell;
  std::vector<double> row;
  std::string line;
  std::getline(rows, line);
  std::istringstream cells(line);
  while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
  REQUIRE(row.size() == 6);

  const json metrics = json::parse(slurp(dir_single / "metrics.json"));
  const json spectral = json::parse(slurp(dir_single / "spectral.json"));
  CHECK(row[0] == 0.8);
  CHECK(row[1] == spectral["mean_a_open"].get<double>());
  CHECK(row[2] == spectral["mean_b_open"].get<double>());
  CHECK(row[3] == metrics["p1_over_pmin"].get<double>());
  CHECK(row[4] == metrics["p1_over_ps"].get<double>());
  CHECK(row[5] == metrics["edge_fraction"].get<double>());

  const json summary = json::parse(slurp(dir_sweep / "sweep_summary.json"));
  CHECK(summary["warnings"].empty());
}

TEST_CASE("a failing sweep point degrades to NaN fields and a warning") {
  const auto dir = fresh_dir("swfail");
  auto base = small_config(dir);
  const int ret = cmd_sweep({{0.0, 0.8}, base});
  CHECK(ret == 1);

  const std::string csv = slurp(dir / "sweep.csv");
  std::istringstream rows(csv);
  std::string header, row0, row1;
  std::getline(rows, header);
  std::getline(rows, row0);
  std::getline(rows, row1);
  // gamma = 0: spectra are fine (Hermitian diagnostic), the walk is not
  CHECK(row0.substr(0, 2) == "0,");
  CHECK(row0.find("nan") != std::string::npos);
  CHECK(row1.find("nan") == std::string::npos);

  const json summary = json::parse(slurp(dir / "sweep_summary.json"));
  REQUIRE(summary["warnings"].size() == 1);
  CHECK(summary["warnings"][0]["gamma"] == 0.0);

  CHECK_THROWS_AS(cmd_sweep({{0.8, 0.4}, base}), std::invalid_argument);
  CHECK_THROWS_AS(cmd_sweep({{}, base}), std::invalid_argument);
}

TEST_CASE("spectrum command accepts the lossless diagnostic limit") {
  const auto dir = fresh_dir("spec0");
  auto cfg = small_config(dir);
  cfg.gamma = 0.0;
  CHECK(cmd_spectrum(cfg) == 0);
  const json j = json::parse(slurp(dir / "spectral.json"));
  CHECK(std::abs(j["imaginary_gap_open"].get<double>()) <= 1e-10);
  CHECK(std::abs(j["imaginary_gap_ring"].get<double>()) <= 1e-10);

  const std::string csv = slurp(dir / "spectrum_open.csv");
  std::istringstream rows(csv.substr(csv.find('\n') + 1));
  std::string line;
  int count = 0;
  while (std::getline(rows, line)) {
    const auto comma = line.find(',');
    CHECK(std::abs(std::stod(line.substr(comma + 1))) <= 1e-10);
    ++count;
  }
  CHECK(count == 2 * cfg.n);

  // the walk itself stays forbidden there
  CHECK_THROWS_AS(cmd_simulate(cfg), std::invalid_argument);
}

TEST_CASE("simulate validates its configuration") {
  auto cfg = small_config(fresh_dir("bad"));
  cfg.bc = "ring";
  CHECK_THROWS_AS(cmd_simulate(cfg), std::invalid_argument);
  cfg = small_config(fresh_dir("bad2"));
  cfg.profile = "quadratic";
  CHECK_THROWS_AS(cmd_simulate(cfg), std::invalid_argument);
  cfg = small_config(fresh_dir("bad3"));
  cfg.s = 99;
  CHECK_THROWS_AS(cmd_simulate(cfg), std::invalid_argument);
}

TEST_CASE("non-convergence leaves a marked partial output and nonzero status") {
  const auto dir = fresh_dir("nonconv");
  auto cfg = small_config(dir);
  cfg.t_max = 2.0;
  CHECK(cmd_simulate(cfg) == 1);
  const json j = json::parse(slurp(dir / "metrics.json"));
  CHECK(j["partial_output"] == true);
  CHECK(j["residual"].get<double>() >= cfg.eps_stop);
}

TEST_CASE("random profile runs are reproducible and echo their rates") {
  const auto dir_a = fresh_dir("rand_a");
  const auto dir_b = fresh_dir("rand_b");
  RunConfig cfg;
  cfg.n = 14;
  cfg.s = 10;
  cfg.profile = "random";
  cfg.gamma_max = 1.5;
  cfg.seed = 99;
  cfg.out_dir = dir_a.string();
  CHECK(cmd_simulate(cfg) == 0);
  cfg.out_dir = dir_b.string();
  CHECK(cmd_simulate(cfg) == 0);

  const json ja = json::parse(slurp(dir_a / "metrics.json"));
  const json jb = json::parse(slurp(dir_b / "metrics.json"));
  REQUIRE(ja["config"]["gamma_n"].size() == 14);
  CHECK(ja["config"]["gamma_n"] == jb["config"]["gamma_n"]);
  for (const auto& g : ja["config"]["gamma_n"]) {
    CHECK(g.get<double>() > 0.0);
    CHECK(g.get<double>() <= 1.5);
  }
  CHECK(slurp(dir_a / "decay.csv") == slurp(dir_b / "decay.csv"));
}

TEST_CASE("binary honors config files, flag overrides and the output env var") {
  const auto dir = fresh_dir("flags");
  const auto conf = dir / "run.conf";
  {
    std::ofstream out(conf);
    out << "n=12\n";
    out << "s=6\n";
    out << "gamma=1.5\n";
  }
  CHECK(run_cli("simulate --config " + conf.string() + " --gamma 2.5 --out " +
                (dir / "run").string()) == 0);
  const json j = json::parse(slurp(dir / "run" / "metrics.json"));
  CHECK(j["config"]["n"] == 12);          // from the config file
  CHECK(j["config"]["gamma"] == 2.5);     // flag wins over the file
  CHECK(j["config"]["s"] == 6);

  const auto env_dir = dir / "from_env";
  const std::string cmd = "EDGEBURST_OUT=" + env_dir.string() + " " +
                          std::string(EDGEBURST_CLI) +
                          " simulate --n 8 --s 4 --gamma 1 >/dev/null 2>&1";
  const int ret = std::system(cmd.c_str());
  REQUIRE(ret != -1);
  CHECK(WEXITSTATUS(ret) == 0);
  CHECK(fs::exists(env_dir / "decay.csv"));
  CHECK(fs::exists(env_dir / "metrics.json"));

  CHECK(run_cli("simulate --n 10 --s 5 --profile nosuch") == 1);
  CHECK(run_cli("nosuchcommand") != 0);
}
