#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqcoint/errors.hpp"
#include "seqcoint/harness.hpp"

using namespace seqcoint;

namespace {

CriticalValueTable bundled_table() {
  return CriticalValueTable::load_csv(std::string(SEQCOINT_DATA_DIR) +
                                      "/critical_values.csv");
}

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.t_list = {200};
  spec.m_rules = {"T/4"};
  spec.eta_list = {0.45};
  spec.break_mode = BreakMode::SlopeBreak;
  spec.delta_beta_list = {1.0};
  spec.reps = 40;
  spec.base_seed = 7;
  return spec;
}

bool cells_equal(const CellResult& a, const CellResult& b) {
  return a.key.t == b.key.t && a.key.m == b.key.m && a.eta == b.eta &&
         a.detections == b.detections && a.rejection_freq == b.rejection_freq &&
         a.delays == b.delays && a.k_hat_abs == b.k_hat_abs &&
         ((std::isnan(a.mean_delay) && std::isnan(b.mean_delay)) ||
          a.mean_delay == b.mean_delay);
}

}  // namespace

TEST_CASE("spec file parses every documented key") {
  std::istringstream in(
      "# comment line\n"
      "t_list = 100, 200\n"
      "m_rules = T/4, T/2\n"
      "rho_x_list = 0, 0.5\n"
      "rho_eps_list = 0.5\n"
      "rho_xeps_list = 0\n"
      "eta_list = 0, 0.45\n"
      "alpha = 0.05\n"
      "gamma = 0.4\n"
      "break = slope\n"
      "delta_beta_list = 0.5, 1\n"
      "sigma_u2 = 2\n"
      "quad_nodes = 2\n"
      "detrend = const-trend\n"
      "kstar_rule = m+T/4\n"
      "reps = 10\n"
      "base_seed = 99\n");
  const ExperimentSpec spec = ExperimentSpec::parse(in, "inline");
  CHECK(spec.t_list == std::vector<int>{100, 200});
  CHECK(spec.m_rules == std::vector<std::string>{"T/4", "T/2"});
  CHECK(spec.rho_eps_list == std::vector<double>{0.5});
  CHECK(spec.gamma == 0.4);
  CHECK(spec.break_mode == BreakMode::SlopeBreak);
  CHECK(spec.detrend == DetrendMode::ConstTrend);
  CHECK(spec.reps == 10);
  CHECK(spec.base_seed == 99);
  CHECK(spec.m_for(200, "T/4") == 50);
  CHECK(spec.m_for(200, "T/2") == 100);
  CHECK(spec.k_star_for(200, 50) == 100);
}

TEST_CASE("unknown spec keys are named in the error") {
  std::istringstream in("t_list = 100\nnonsense_key = 3\n");
  try {
    ExperimentSpec::parse(in, "inline");
    FAIL("expected config_error");
  } catch (const config_error& ex) {
    CHECK(std::string(ex.what()).find("nonsense_key") != std::string::npos);
    CHECK(std::string(ex.what()).find("inline:2") != std::string::npos);
  }
}

TEST_CASE("fractional k* rule") {
  ExperimentSpec spec = small_spec();
  spec.kstar_rule = "frac:0.6";
  CHECK(spec.k_star_for(200, 50) == 120);
}

TEST_CASE("spec save and parse round trip") {
  ExperimentSpec spec = small_spec();
  spec.rho_x_list = {0.0, 0.5};
  spec.detrend = DetrendMode::ConstTrend;
  const std::string path = "/tmp/seqcoint_spec_rt.spec";
  spec.save(path);
  const ExperimentSpec back = ExperimentSpec::parse_file(path);
  CHECK(back.t_list == spec.t_list);
  CHECK(back.m_rules == spec.m_rules);
  CHECK(back.rho_x_list == spec.rho_x_list);
  CHECK(back.eta_list == spec.eta_list);
  CHECK(back.delta_beta_list == spec.delta_beta_list);
  CHECK(back.break_mode == spec.break_mode);
  CHECK(back.detrend == spec.detrend);
  CHECK(back.reps == spec.reps);
  CHECK(back.base_seed == spec.base_seed);
  std::remove(path.c_str());
}

TEST_CASE("serial and threaded runs produce identical results") {
  const ExperimentSpec spec = small_spec();
  const CriticalValueTable table = bundled_table();
  const ExperimentResult serial = run_experiment(spec, table, 1);
  const ExperimentResult threaded = run_experiment(spec, table, 3);
  REQUIRE(serial.cells.size() == threaded.cells.size());
  for (std::size_t i = 0; i < serial.cells.size(); ++i)
    CHECK(cells_equal(serial.cells[i], threaded.cells[i]));
}

TEST_CASE("a bad cell aborts alone and is recorded") {
  ExperimentSpec spec = small_spec();
  spec.t_list = {200, 7};  // t = 7 gives m = 1, an invalid monitor config
  spec.break_mode = BreakMode::None;
  spec.delta_beta_list.clear();
  const ExperimentResult result = run_experiment(spec, bundled_table(), 1);
  REQUIRE(result.cells.size() == 2);
  CHECK(result.cells[0].error.empty());
  CHECK(!result.cells[1].error.empty());
  CHECK(result.cells[0].reps == spec.reps);
}

TEST_CASE("missing critical values abort the cell with a pointer to critvals") {
  ExperimentSpec spec = small_spec();
  spec.eta_list = {0.33};
  const ExperimentResult result = run_experiment(spec, bundled_table(), 1);
  REQUIRE(result.cells.size() == 1);
  CHECK(result.cells[0].error.find("critvals") != std::string::npos);
}

TEST_CASE("summary CSV for an empty result is header-only") {
  ExperimentResult empty;
  const std::string path = "/tmp/seqcoint_empty.csv";
  write_summary_csv(empty, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 1);
  std::remove(path.c_str());
}

TEST_CASE("one cell produces one row per eta") {
  ExperimentSpec spec = small_spec();
  spec.eta_list = {0.0, 0.45, 0.49};
  spec.reps = 5;
  const ExperimentResult result = run_experiment(spec, bundled_table(), 1);
  const std::string path = "/tmp/seqcoint_onecell.csv";
  write_summary_csv(result, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 1 + 3);
  std::remove(path.c_str());
}

TEST_CASE("JSON summary round trip preserves every numeric field") {
  ExperimentSpec spec = small_spec();
  spec.eta_list = {0.45, 0.49};
  spec.reps = 25;
  const ExperimentResult result = run_experiment(spec, bundled_table(), 1);
  const std::string path = "/tmp/seqcoint_rt.json";
  write_summary_json(result, path);
  const ExperimentResult back = read_summary_json(path);
  CHECK(back.spec.alpha == result.spec.alpha);
  CHECK(back.spec.gamma == result.spec.gamma);
  CHECK(back.spec.reps == result.spec.reps);
  CHECK(back.spec.base_seed == result.spec.base_seed);
  REQUIRE(back.cells.size() == result.cells.size());
  for (std::size_t i = 0; i < result.cells.size(); ++i)
    CHECK(cells_equal(back.cells[i], result.cells[i]));
  std::remove(path.c_str());
}

TEST_CASE("histogram mass equals the number of detecting replications") {
  ExperimentSpec spec = small_spec();
  spec.reps = 30;
  const ExperimentResult result = run_experiment(spec, bundled_table(), 1);
  const std::string dir = "/tmp/seqcoint_hist_test";
  std::filesystem::create_directories(dir);
  write_histograms(result, dir);

  long mass = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      if (comma != std::string::npos) mass += std::stol(line.substr(comma + 1));
    }
  }
  CHECK(mass == result.cells[0].detections);
  std::filesystem::remove_all(dir);
}

TEST_CASE("no-break cells do not report delays") {
  ExperimentSpec spec = small_spec();
  spec.break_mode = BreakMode::None;
  spec.delta_beta_list.clear();
  spec.reps = 60;
  const ExperimentResult result = run_experiment(spec, bundled_table(), 1);
  CHECK(result.cells[0].delays.empty());
  CHECK(std::isnan(result.cells[0].mean_delay));
}
