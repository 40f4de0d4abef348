#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqcoint/boundary.hpp"
#include "seqcoint/detector.hpp"
#include "seqcoint/estimator.hpp"
#include "seqcoint/lrv.hpp"
#include "seqcoint/randomizer.hpp"
#include "seqcoint/rng.hpp"

namespace seqcoint {

/// All tuning for one monitoring session. Defaults follow the simulation
/// settings: eta = 0.45, alpha = 0.05, gamma = 0.45, R = m, n_S = 2,
/// H = floor(m^(1/6)).
struct MonitorConfig {
  int m = 0;
  long horizon = 0;  // T_m; the procedure is closed-end and stops there
  double eta = 0.45;
  double alpha = 0.05;
  std::optional<double> gamma;                          // direct setting wins
  std::optional<std::pair<double, double>> delta_theta; // (delta, theta) rule
  std::optional<int> replicates;                        // R, default m
  int quad_nodes = 2;
  std::optional<int> bandwidth;                         // H, default floor(m^(1/6))
  DetrendMode detrend = DetrendMode::None;
  /// Required for eta < 1/2 (from the critical-value table or crit_sim);
  /// eta = 1/2 resolves via the Gumbel formula and ignores this.
  std::optional<CriticalValue> critical;
  std::uint64_t seed = 0;

  double resolve_gamma() const;  // warns on conflict, gamma wins
  int resolve_replicates() const;
  int resolve_bandwidth() const;
  void validate() const;
};

struct StepReport {
  long k = 0;          // monitoring-relative index
  double q = 0.0;
  double log_psi_tilde = 0.0;
  double theta = 0.0;
  double d = 0.0;
  double nu = 0.0;
  bool crossed = false;
};

struct DetectionReport {
  bool detected = false;
  long k_hat = 0;      // monitoring-relative stopping index; = T_m if no crossing
  long k_hat_abs = 0;  // m + k_hat
  bool crossed_at_horizon = false;  // crossing exactly at k = T_m
  double crossing_d = 0.0;
  double crossing_nu = 0.0;
  std::optional<double> delay;  // (k_hat_abs - k_star) / k_star, absolute indices
  std::vector<StepReport> trace;
};

/// Online monitoring session: calibrates on the first m observations, then
/// consumes post-calibration observations one at a time. Single writer; the
/// per-step Theta draw is keyed to substream k of the session seed, so a
/// re-run with the same inputs replays identically.
class Monitor {
 public:
  Monitor(const Eigen::MatrixXd& x_calib, const Eigen::VectorXd& y_calib,
          const MonitorConfig& cfg);

  /// Consumes observation m+k. Throws state_error once stopped or past T_m.
  StepReport step(double y_i, const Eigen::Ref<const Eigen::RowVectorXd>& x_i);

  bool stopped() const { return stopped_; }
  long k() const { return k_; }
  const CalibrationFit& fit() const { return fit_; }
  const LrvEstimate& lrv() const { return lrv_; }
  double gamma() const { return gamma_; }
  const CriticalValue& critical() const { return crit_; }

  /// Full-series run: y/x hold the calibration sample followed by exactly
  /// T_m monitoring observations. k_star (absolute) enables the delay field.
  static DetectionReport run(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             const MonitorConfig& cfg,
                             std::optional<long> k_star = std::nullopt,
                             bool keep_trace = false);

  /// Writes a trace CSV with columns k,Q,log_psi_tilde,theta,d,nu,crossed.
  static void write_trace_csv(const std::vector<StepReport>& trace, const std::string& path);

 private:
  MonitorConfig cfg_;
  CalibrationFit fit_;
  LrvEstimate lrv_;
  double gamma_;
  int replicates_;
  QuadratureRule rule_;
  CriticalValue crit_;
  rng::Stream rand_stream_;
  QAccumulator q_accum_;
  RecursiveTrendState trend_state_;
  double theta_cumsum_ = 0.0;
  long k_ = 0;
  bool stopped_ = false;
};

}  // namespace seqcoint
