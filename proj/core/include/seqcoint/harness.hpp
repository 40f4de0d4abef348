#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqcoint/boundary.hpp"
#include "seqcoint/dgp.hpp"
#include "seqcoint/estimator.hpp"

namespace seqcoint {

/// Grid specification for a Monte Carlo experiment; parsed from a flat
/// key = value file (see parse for the key list).
struct ExperimentSpec {
  std::vector<int> t_list;
  std::vector<std::string> m_rules{"T/4"};  // "T/4" or "T/2"
  std::vector<double> rho_x_list{0.0};
  std::vector<double> rho_eps_list{0.0};
  std::vector<double> rho_xeps_list{0.0};
  std::vector<double> eta_list{0.45};
  double alpha = 0.05;
  double gamma = 0.45;
  BreakMode break_mode = BreakMode::None;
  std::vector<double> delta_beta_list;  // slope-shift magnitudes for slope modes
  double sigma_u2 = 2.0;
  int quad_nodes = 2;
  DetrendMode detrend = DetrendMode::None;
  std::string kstar_rule = "m+T/4";  // or "frac:<f>" for a fraction of T
  int reps = 1000;
  std::uint64_t base_seed = 20250809;

  static ExperimentSpec parse_file(const std::string& path);
  static ExperimentSpec parse(std::istream& in, const std::string& name);
  void save(const std::string& path) const;

  int m_for(int t, const std::string& rule) const;
  int k_star_for(int t, int m) const;
  void validate() const;
};

struct CellKey {
  int t = 0;
  int m = 0;
  double rho_x = 0.0;
  double rho_eps = 0.0;
  double rho_xeps = 0.0;
  double delta_beta = 0.0;
  BreakMode break_mode = BreakMode::None;
  int k_star = 0;
};

/// Aggregates for one grid cell at one eta.
struct CellResult {
  CellKey key;
  double eta = 0.0;
  int reps = 0;
  int detections = 0;
  double rejection_freq = 0.0;
  /// Mean of (k_hat_abs - k*)/k* over detecting replications; NaN if none.
  double mean_delay = 0.0;
  std::vector<double> delays;       // detecting replications only
  std::vector<long> k_hat_abs;      // detecting replications only
  std::string error;                // non-empty when the cell aborted
  double runtime_sec = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<CellResult> cells;
  double total_runtime_sec = 0.0;
};

/// Runs every (cell, replication) with derivation-based seeding
/// (base_seed, cell, replication, role), so results are identical whether
/// replications run serially or across threads. A cell-level configuration
/// error aborts that cell only and is recorded on its results.
ExperimentResult run_experiment(const ExperimentSpec& spec, const CriticalValueTable& critvals,
                                int threads = 0);

void write_summary_csv(const ExperimentResult& result, const std::string& path);
void write_summary_json(const ExperimentResult& result, const std::string& path);
ExperimentResult read_summary_json(const std::string& path);
/// One CSV per cell x eta with columns k_hat_abs,count.
void write_histograms(const ExperimentResult& result, const std::string& directory);

}  // namespace seqcoint
