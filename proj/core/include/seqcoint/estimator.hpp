#pragma once

#include <Eigen/Dense>
#include <utility>

namespace seqcoint {

enum class DetrendMode { None, ConstTrend };

/// Calibration-window fit: slope estimated once over i = 1..m and never
/// updated during monitoring.
struct CalibrationFit {
  Eigen::VectorXd beta_hat;
  DetrendMode mode = DetrendMode::None;
  int m = 0;
  // trend coefficients when detrended: value + slope per regressor and for y
  Eigen::VectorXd x_b0, x_b1;
  double y_a0 = 0.0, y_a1 = 0.0;
};

/// beta_hat = (sum x_i x_i')^{-1} sum x_i y_i over the supplied rows.
/// Throws estimation_error with condition diagnostics when the Gram matrix
/// is singular (condition number guard at 1e12).
Eigen::VectorXd ols_slope(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

CalibrationFit fit_plain(const Eigen::MatrixXd& x_calib, const Eigen::VectorXd& y_calib);

/// Demeans and detrends y and every x column on {1, i} over 1..m by least
/// squares, then regresses the y residuals on the x residuals.
/// pre: m > p + 2.
CalibrationFit detrend_fit(const Eigen::MatrixXd& x_calib, const Eigen::VectorXd& y_calib);

/// Plain residual eps_hat_i = y_i - beta_hat' x_i (fit.mode must be None).
double residual(const CalibrationFit& fit, const Eigen::Ref<const Eigen::RowVectorXd>& x_i,
                double y_i);

/// First-stage detrended residual eps_tilde_i = y_i - beta_hat_d' x_i,
/// before the recursive trend removal (fit.mode must be ConstTrend).
double tilde_residual(const CalibrationFit& fit,
                      const Eigen::Ref<const Eigen::RowVectorXd>& x_i, double y_i);

/// Running sums over j = 1..i for the recursive intercept+trend fit of the
/// eps_tilde series. Single writer per monitoring session.
class RecursiveTrendState {
 public:
  /// Adds eps_tilde at 1-based index i; indices must be fed in order 1,2,...
  void update(double eps_tilde, long index);

  /// update() followed by the recursively detrended residual
  /// eps_tilde - (mu0_hat + mu1_hat * i). Requires index >= 2 overall.
  double detrended(double eps_tilde, long index);

  /// (mu0_hat, mu1_hat) over the points seen so far; throws state_error
  /// until two points are available.
  std::pair<double, double> trend() const;

  long count() const { return n_; }

 private:
  long n_ = 0;
  double sum_j_ = 0.0, sum_jj_ = 0.0, sum_e_ = 0.0, sum_je_ = 0.0;
};

}  // namespace seqcoint
