// Command-line surface for sequential cointegration monitoring:
//   monitor   run the detector over a CSV series
//   simulate  run a Monte Carlo experiment from a spec file
//   critvals  (re)generate the simulated critical-value table
//   gen       write a synthetic sample to CSV
//
// Exit codes for `monitor`: 0 = no detection, 2 = detection, 1 = error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqcoint/boundary.hpp"
#include "seqcoint/dgp.hpp"
#include "seqcoint/errors.hpp"
#include "seqcoint/harness.hpp"
#include "seqcoint/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDetection = 2;

struct MonitorArgs {
  std::string data_path;
  int m = 0;
  double eta = 0.45;
  double alpha = 0.05;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> theta;
  std::optional<int> replicates;
  int nodes = 2;
  std::optional<int> bandwidth;
  std::string detrend = "none";
  std::uint64_t seed = 1;
  std::string trace_path;
  std::string critvals_path = "data/critical_values.csv";
  std::optional<double> crit_value;
};

int run_monitor(const MonitorArgs& args) {
  using namespace seqcoint;
  const DataFrameIn frame = load_dataframe(args.data_path);

  MonitorConfig cfg;
  cfg.m = args.m;
  cfg.horizon = 1;  // derived from the row count by monitor_dataframe
  cfg.eta = args.eta;
  cfg.alpha = args.alpha;
  if (args.gamma) cfg.gamma = *args.gamma;
  if (args.delta && args.theta) cfg.delta_theta = std::make_pair(*args.delta, *args.theta);
  cfg.replicates = args.replicates;
  cfg.quad_nodes = args.nodes;
  cfg.bandwidth = args.bandwidth;
  cfg.detrend = args.detrend == "const-trend" ? DetrendMode::ConstTrend : DetrendMode::None;
  cfg.seed = args.seed;

  if (cfg.eta < 0.5) {
    if (args.crit_value) {
      CriticalValue crit;
      crit.eta = cfg.eta;
      crit.alpha = cfg.alpha;
      crit.value = *args.crit_value;
      crit.source = CritSource::Table;
      cfg.critical = crit;
    } else {
      if (!std::filesystem::exists(args.critvals_path))
        throw io_error(args.critvals_path +
                       ": critical-value table not found (run `seqcoint critvals` or pass "
                       "--crit-value)");
      const auto table = CriticalValueTable::load_csv(args.critvals_path);
      const auto crit = table.find(cfg.eta, cfg.alpha);
      if (!crit)
        throw config_error("no critical value for eta=" + std::to_string(cfg.eta) +
                           ", alpha=" + std::to_string(cfg.alpha) + " in " + args.critvals_path);
      cfg.critical = *crit;
    }
  }

  const MonitorRunOutput out = monitor_dataframe(frame, cfg, args.trace_path);
  const DetectionReport& report = out.report;

  std::cout << "detected: " << (report.detected ? "yes" : "no") << "\n"
            << "k_hat: " << report.k_hat << " (absolute index " << report.k_hat_abs << ")\n";
  if (!out.k_hat_label.empty())
    std::cout << frame.label_name << ": " << out.k_hat_label << "\n";
  if (report.crossed_at_horizon) std::cout << "note: crossing exactly at the horizon\n";
  std::cout << "d: " << report.crossing_d << "\nnu: " << report.crossing_nu << "\n";
  return report.detected ? kExitDetection : kExitOk;
}

int run_simulate(const std::string& spec_path, const std::string& out_dir, bool quick,
                 const std::string& critvals_path, int threads) {
  using namespace seqcoint;
  ExperimentSpec spec = ExperimentSpec::parse_file(spec_path);
  if (quick && spec.reps > 200) spec.reps = 200;

  if (!std::filesystem::exists(critvals_path))
    throw io_error(critvals_path + ": critical-value table not found");
  const auto table = CriticalValueTable::load_csv(critvals_path);

  std::filesystem::create_directories(out_dir);
  std::filesystem::create_directories(out_dir + "/hist");

  const ExperimentResult result = run_experiment(spec, table, threads);
  write_summary_csv(result, out_dir + "/summary.csv");
  write_summary_json(result, out_dir + "/summary.json");
  write_histograms(result, out_dir + "/hist");

  int aborted = 0;
  for (const auto& cell : result.cells)
    if (!cell.error.empty()) ++aborted;
  std::cout << "cells: " << result.cells.size() << " (aborted: " << aborted << ")\n"
            << "runtime: " << result.total_runtime_sec << " s\n"
            << "results in " << out_dir << "\n";
  return kExitOk;
}

int run_critvals(const std::vector<double>& etas, const std::vector<double>& alphas,
                 long paths, long grid, std::uint64_t seed, const std::string& out_path,
                 int threads) {
  using namespace seqcoint;
  for (double eta : etas)
    if (!(eta >= 0.0 && eta < 0.5))
      throw config_error("critvals handles eta in [0, 1/2); eta = 1/2 uses the analytic "
                         "Gumbel formula inside the monitor");

  CriticalValueTable table;
  if (std::filesystem::exists(out_path)) table = CriticalValueTable::load_csv(out_path);
  for (const auto& crit : crit_sim_multi(etas, alphas, paths, grid, seed, threads))
    table.insert(crit);
  table.save_csv(out_path);
  std::cout << "wrote " << table.entries().size() << " rows to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential monitoring of cointegrating regressions"};
  app.require_subcommand(1);

  MonitorArgs margs;
  auto* monitor = app.add_subcommand("monitor", "Monitor a CSV series for structural change");
  monitor->add_option("--data", margs.data_path, "CSV with y, x1..xp and optional date column")
      ->required();
  monitor->add_option("--m", margs.m, "calibration length")->required();
  monitor->add_option("--eta", margs.eta, "boundary exponent in [0, 0.5]")->capture_default_str();
  monitor->add_option("--alpha", margs.alpha, "significance level")->capture_default_str();
  monitor->add_option("--gamma", margs.gamma, "growth-bound exponent (wins over delta/theta)");
  monitor->add_option("--delta", margs.delta, "gamma rule input delta in (0,1)");
  monitor->add_option("--theta", margs.theta, "gamma rule input theta > 1");
  monitor->add_option("--replicates", margs.replicates, "randomisation sample size R (default m)");
  monitor->add_option("--nodes", margs.nodes, "Gauss-Hermite nodes (1, 2, 4)")->capture_default_str();
  monitor->add_option("--bandwidth", margs.bandwidth, "Bartlett bandwidth H (default floor(m^(1/6)))");
  monitor->add_option("--detrend", margs.detrend, "none or const-trend")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "const-trend"}));
  monitor->add_option("--seed", margs.seed, "randomisation seed")->capture_default_str();
  monitor->add_option("--trace", margs.trace_path, "write per-step trace CSV here");
  monitor->add_option("--critvals", margs.critvals_path, "critical-value table CSV")->capture_default_str();
  monitor->add_option("--crit-value", margs.crit_value, "explicit critical value override");

  std::string spec_path, out_dir = "results";
  bool quick = false;
  int threads = 0;
  std::string sim_critvals = "data/critical_values.csv";
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment spec");
  simulate->add_option("--spec", spec_path, "experiment spec file")->required();
  simulate->add_option("--out", out_dir, "output directory")->capture_default_str();
  simulate->add_flag("--quick", quick, "cap replications at 200 for CI");
  simulate->add_option("--critvals", sim_critvals, "critical-value table CSV")->capture_default_str();
  simulate->add_option("--threads", threads, "worker threads (default: SEQCOINT_THREADS or cores)");

  std::vector<double> etas{0.0, 0.45, 0.49};
  std::vector<double> alphas{0.05};
  long paths = 100000, grid = 10000;
  std::uint64_t cv_seed = 20250809;
  std::string cv_out = "data/critical_values.csv";
  int cv_threads = 0;
  auto* critvals = app.add_subcommand("critvals", "Simulate sup|B(t)|/t^eta critical values");
  critvals->add_option("--etas", etas, "eta values in [0, 0.5)")->capture_default_str();
  critvals->add_option("--alphas", alphas, "significance levels")->capture_default_str();
  critvals->add_option("--paths", paths, "Brownian paths")->capture_default_str();
  critvals->add_option("--grid", grid, "grid points on [0,1]")->capture_default_str();
  critvals->add_option("--seed", cv_seed, "simulation seed")->capture_default_str();
  critvals->add_option("--out", cv_out, "output table CSV")->capture_default_str();
  critvals->add_option("--threads", cv_threads, "worker threads");

  int gen_t = 200, gen_m = 50, gen_p = 1;
  double gen_rho_x = 0.0, gen_rho_eps = 0.0, gen_rho_xeps = 0.0, gen_sigma_u2 = 2.0;
  double gen_mu0 = 0.0, gen_mu1 = 0.0, gen_delta = 0.0;
  std::string gen_break = "none", gen_out = "sample.csv";
  int gen_kstar = 0;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic sample CSV");
  gen->add_option("--t", gen_t, "total length T")->capture_default_str();
  gen->add_option("--m", gen_m, "calibration length (validates the break index)")->capture_default_str();
  gen->add_option("--p", gen_p, "number of regressors")->capture_default_str();
  gen->add_option("--rho-x", gen_rho_x, "AR(1) coefficient of u")->capture_default_str();
  gen->add_option("--rho-eps", gen_rho_eps, "AR(1) coefficient of the error")->capture_default_str();
  gen->add_option("--rho-xeps", gen_rho_xeps, "endogeneity coupling")->capture_default_str();
  gen->add_option("--sigma-u2", gen_sigma_u2, "innovation variance of v^u")->capture_default_str();
  gen->add_option("--mu0", gen_mu0, "intercept")->capture_default_str();
  gen->add_option("--mu1", gen_mu1, "linear trend")->capture_default_str();
  gen->add_option("--break", gen_break, "none, slope, coint, local-slope, local-coint")->capture_default_str();
  gen->add_option("--delta-beta", gen_delta, "slope shift for break=slope")->capture_default_str();
  gen->add_option("--k-star", gen_kstar, "absolute break index (default: T, no break)");
  gen->add_option("--seed", gen_seed, "generation seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output CSV")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (monitor->parsed()) return run_monitor(margs);
    if (simulate->parsed())
      return run_simulate(spec_path, out_dir, quick, sim_critvals, threads);
    if (critvals->parsed())
      return run_critvals(etas, alphas, paths, grid, cv_seed, cv_out, cv_threads);
    if (gen->parsed()) {
      seqcoint::DgpSpec spec;
      spec.p = gen_p;
      spec.t_total = gen_t;
      spec.m_calib = gen_m;
      spec.rho_x = gen_rho_x;
      spec.rho_eps = gen_rho_eps;
      spec.rho_xeps = gen_rho_xeps;
      spec.sigma_u2 = gen_sigma_u2;
      spec.mu0 = gen_mu0;
      spec.mu1 = gen_mu1;
      spec.break_mode = seqcoint::break_mode_from_string(gen_break);
      if (spec.break_mode == seqcoint::BreakMode::SlopeBreak)
        spec.delta_beta = Eigen::VectorXd::Constant(gen_p, gen_delta);
      spec.k_star = gen_kstar > 0 ? gen_kstar : gen_t;
      spec.seed = gen_seed;
      seqcoint::write_sample_csv(seqcoint::generate(spec), gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return kExitOk;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
