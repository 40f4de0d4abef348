#include "seqcoint/monitor.hpp"

#include <cmath>
#include <iostream>

#include "seqcoint/csv.hpp"
#include "seqcoint/errors.hpp"

namespace seqcoint {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

double MonitorConfig::resolve_gamma() const {
  if (gamma) {
    if (delta_theta)
      std::cerr << "seqcoint: both gamma and (delta, theta) set; gamma wins\n";
    return *gamma;
  }
  if (delta_theta) return gamma_rule(delta_theta->first, delta_theta->second);
  return 0.45;
}

int MonitorConfig::resolve_replicates() const {
  return replicates ? *replicates : select_R(m);
}

int MonitorConfig::resolve_bandwidth() const {
  return bandwidth ? *bandwidth : default_bandwidth(m);
}

void MonitorConfig::validate() const {
  if (m < 1) throw config_error("MonitorConfig: need m >= 1");
  if (horizon < 1) throw config_error("MonitorConfig: need T_m >= 1");
  if (!(eta >= 0.0 && eta <= 0.5)) throw config_error("MonitorConfig: eta must be in [0, 1/2]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("MonitorConfig: alpha must be in (0,1)");
  if (resolve_replicates() < 1) throw config_error("MonitorConfig: need R >= 1");
  const int h = resolve_bandwidth();
  if (h < 0 || h >= m) throw config_error("MonitorConfig: need 0 <= H < m");
  if (eta < 0.5 && !critical)
    throw config_error(
        "MonitorConfig: eta < 1/2 needs a critical value (table lookup or crit_sim); "
        "eta = 1/2 uses the Gumbel formula");
}

Monitor::Monitor(const Eigen::MatrixXd& x_calib, const Eigen::VectorXd& y_calib,
                 const MonitorConfig& cfg)
    : cfg_(cfg),
      gamma_(0.0),
      replicates_(0),
      rand_stream_(cfg.seed),
      q_accum_(1.0) {
  cfg_.validate();
  if (x_calib.rows() != cfg_.m || y_calib.size() != cfg_.m)
    throw config_error("Monitor: calibration data length must equal m");

  gamma_ = cfg_.resolve_gamma();
  replicates_ = cfg_.resolve_replicates();
  // R = m always satisfies the rate restriction; only overrides are policed.
  if (cfg_.replicates && r_rate_violated(replicates_, cfg_.m, gamma_))
    std::cerr << "seqcoint: R = " << replicates_ << " violates the R exp(-m^gamma) rate rule\n";
  rule_ = gh_rule(cfg_.quad_nodes);

  fit_ = cfg_.detrend == DetrendMode::ConstTrend ? detrend_fit(x_calib, y_calib)
                                                 : fit_plain(x_calib, y_calib);

  // Calibration residuals feed the long-run variance, which stays frozen for
  // the whole horizon. The detrended pipeline removes the final calibration
  // trend fit from eps_tilde over i = 1..m and seeds the recursive state so
  // monitoring updates continue the j = 1..i sums.
  std::vector<double> calib_resid(static_cast<std::size_t>(cfg_.m));
  if (cfg_.detrend == DetrendMode::ConstTrend) {
    std::vector<double> tilde(static_cast<std::size_t>(cfg_.m));
    for (int i = 0; i < cfg_.m; ++i) {
      tilde[static_cast<std::size_t>(i)] = tilde_residual(fit_, x_calib.row(i), y_calib(i));
      trend_state_.update(tilde[static_cast<std::size_t>(i)], i + 1);
    }
    const auto [mu0, mu1] = trend_state_.trend();
    for (int i = 0; i < cfg_.m; ++i)
      calib_resid[static_cast<std::size_t>(i)] =
          tilde[static_cast<std::size_t>(i)] - mu0 - mu1 * static_cast<double>(i + 1);
  } else {
    for (int i = 0; i < cfg_.m; ++i)
      calib_resid[static_cast<std::size_t>(i)] = residual(fit_, x_calib.row(i), y_calib(i));
  }
  lrv_ = bartlett_lrv(calib_resid, cfg_.resolve_bandwidth());
  q_accum_ = QAccumulator(lrv_.sigma2);

  crit_ = cfg_.eta == 0.5 ? crit_gumbel(cfg_.alpha, cfg_.m) : *cfg_.critical;
  if (cfg_.eta < 0.5 && std::abs(crit_.eta - cfg_.eta) > 1e-9)
    throw config_error("Monitor: critical value eta does not match config eta");
}

StepReport Monitor::step(double y_i, const Eigen::Ref<const Eigen::RowVectorXd>& x_i) {
  if (stopped_) throw state_error("Monitor: session already stopped");
  if (k_ >= cfg_.horizon) throw state_error("Monitor: horizon exhausted (closed-end)");
  ++k_;
  const long abs_index = cfg_.m + k_;

  double eps_hat;
  if (cfg_.detrend == DetrendMode::ConstTrend) {
    const double tilde = tilde_residual(fit_, x_i, y_i);
    eps_hat = trend_state_.detrended(tilde, abs_index);
  } else {
    eps_hat = residual(fit_, x_i, y_i);
  }

  StepReport report;
  report.k = k_;
  report.q = q_accum_.add(eps_hat);
  const PsiValue psi = psi_transform(report.q, g_bound(cfg_.m, k_, gamma_));
  report.log_psi_tilde = psi.log_psi_tilde;

  rng::Stream sub = rand_stream_.substream(static_cast<std::uint64_t>(k_));
  const ThetaDraw draw = theta_stat(psi, replicates_, rule_, sub, k_);
  report.theta = draw.theta;

  theta_cumsum_ += (draw.theta - 1.0) / kSqrt2;
  report.d = std::abs(theta_cumsum_);
  report.nu = boundary_value(cfg_.m, k_, crit_);
  report.crossed = report.d >= report.nu;
  if (report.crossed) stopped_ = true;
  return report;
}

DetectionReport Monitor::run(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             const MonitorConfig& cfg, std::optional<long> k_star,
                             bool keep_trace) {
  cfg.validate();
  if (x.rows() != y.size()) throw config_error("Monitor::run: x/y length mismatch");
  if (y.size() != cfg.m + cfg.horizon)
    throw config_error("Monitor::run: series length must be m + T_m");

  Monitor session(x.topRows(cfg.m), y.head(cfg.m), cfg);

  DetectionReport report;
  report.k_hat = cfg.horizon;
  for (long k = 1; k <= cfg.horizon; ++k) {
    const long row = cfg.m + k - 1;
    const StepReport step = session.step(y(row), x.row(row));
    if (keep_trace) report.trace.push_back(step);
    if (step.crossed) {
      report.detected = true;
      report.k_hat = k;
      report.crossing_d = step.d;
      report.crossing_nu = step.nu;
      break;
    }
    if (k == cfg.horizon) {
      report.crossing_d = step.d;
      report.crossing_nu = step.nu;
    }
  }
  report.k_hat_abs = cfg.m + report.k_hat;
  report.crossed_at_horizon = report.detected && report.k_hat == cfg.horizon;
  if (k_star) {
    const double ks = static_cast<double>(*k_star);
    report.delay = (static_cast<double>(report.k_hat_abs) - ks) / ks;
  }
  return report;
}

void Monitor::write_trace_csv(const std::vector<StepReport>& trace, const std::string& path) {
  csv::Writer writer(path);
  writer.row({"k", "Q", "log_psi_tilde", "theta", "d", "nu", "crossed"});
  for (const auto& step : trace) {
    writer.row({std::to_string(step.k), csv::format(step.q), csv::format(step.log_psi_tilde),
                csv::format(step.theta), csv::format(step.d), csv::format(step.nu),
                step.crossed ? "1" : "0"});
  }
}

}  // namespace seqcoint
