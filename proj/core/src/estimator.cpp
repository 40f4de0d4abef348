#include "seqcoint/estimator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "seqcoint/errors.hpp"

namespace seqcoint {

namespace {

constexpr double kConditionGuard = 1e12;

Eigen::VectorXd solve_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kConditionGuard) {
    std::ostringstream msg;
    msg << "singular Gram matrix: eigenvalue range [" << lo << ", " << hi
        << "], condition " << (lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    throw estimation_error(msg.str());
  }
  return gram.ldlt().solve(rhs);
}

// Least-squares fit of a series on {1, j} over j = 1..m; returns (level, slope).
std::pair<double, double> trend_coeffs(const Eigen::VectorXd& series) {
  const long m = series.size();
  const double n = static_cast<double>(m);
  double sum_j = 0.0, sum_jj = 0.0, sum_e = 0.0, sum_je = 0.0;
  for (long i = 0; i < m; ++i) {
    const double j = static_cast<double>(i + 1);
    sum_j += j;
    sum_jj += j * j;
    sum_e += series(i);
    sum_je += j * series(i);
  }
  const double det = n * sum_jj - sum_j * sum_j;
  if (!(std::abs(det) > n * sum_jj / kConditionGuard))
    throw estimation_error("degenerate trend design in calibration window");
  const double b0 = (sum_jj * sum_e - sum_j * sum_je) / det;
  const double b1 = (n * sum_je - sum_j * sum_e) / det;
  return {b0, b1};
}

}  // namespace

Eigen::VectorXd ols_slope(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw config_error("ols_slope: length mismatch");
  if (x.rows() <= x.cols()) throw config_error("ols_slope: need m > p");
  const Eigen::MatrixXd gram = x.transpose() * x;
  const Eigen::VectorXd rhs = x.transpose() * y;
  return solve_gram(gram, rhs);
}

CalibrationFit fit_plain(const Eigen::MatrixXd& x_calib, const Eigen::VectorXd& y_calib) {
  CalibrationFit fit;
  fit.mode = DetrendMode::None;
  fit.m = static_cast<int>(x_calib.rows());
  fit.beta_hat = ols_slope(x_calib, y_calib);
  return fit;
}

CalibrationFit detrend_fit(const Eigen::MatrixXd& x_calib, const Eigen::VectorXd& y_calib) {
  const long m = x_calib.rows();
  const long p = x_calib.cols();
  if (m != y_calib.size()) throw config_error("detrend_fit: length mismatch");
  if (m <= p + 2) throw config_error("detrend_fit: need m > p + 2");

  CalibrationFit fit;
  fit.mode = DetrendMode::ConstTrend;
  fit.m = static_cast<int>(m);
  fit.x_b0.resize(p);
  fit.x_b1.resize(p);

  Eigen::MatrixXd x_res(m, p);
  for (long j = 0; j < p; ++j) {
    const auto [b0, b1] = trend_coeffs(x_calib.col(j));
    fit.x_b0(j) = b0;
    fit.x_b1(j) = b1;
    for (long i = 0; i < m; ++i)
      x_res(i, j) = x_calib(i, j) - b0 - b1 * static_cast<double>(i + 1);
  }
  const auto [a0, a1] = trend_coeffs(y_calib);
  fit.y_a0 = a0;
  fit.y_a1 = a1;
  Eigen::VectorXd y_res(m);
  for (long i = 0; i < m; ++i)
    y_res(i) = y_calib(i) - a0 - a1 * static_cast<double>(i + 1);

  fit.beta_hat = ols_slope(x_res, y_res);
  return fit;
}

double residual(const CalibrationFit& fit, const Eigen::Ref<const Eigen::RowVectorXd>& x_i,
                double y_i) {
  double value = y_i;
  for (long j = 0; j < fit.beta_hat.size(); ++j) value -= fit.beta_hat(j) * x_i(j);
  return value;
}

double tilde_residual(const CalibrationFit& fit,
                      const Eigen::Ref<const Eigen::RowVectorXd>& x_i, double y_i) {
  if (fit.mode != DetrendMode::ConstTrend)
    throw state_error("tilde_residual: fit is not detrended");
  double value = y_i;
  for (long j = 0; j < fit.beta_hat.size(); ++j) value -= fit.beta_hat(j) * x_i(j);
  return value;
}

void RecursiveTrendState::update(double eps_tilde, long index) {
  if (index != n_ + 1) throw state_error("RecursiveTrendState: indices must be 1,2,...");
  n_ = index;
  const double j = static_cast<double>(index);
  sum_j_ += j;
  sum_jj_ += j * j;
  sum_e_ += eps_tilde;
  sum_je_ += j * eps_tilde;
}

std::pair<double, double> RecursiveTrendState::trend() const {
  if (n_ < 2) throw state_error("RecursiveTrendState: need two points for intercept+slope");
  const double n = static_cast<double>(n_);
  const double det = n * sum_jj_ - sum_j_ * sum_j_;
  const double mu0 = (sum_jj_ * sum_e_ - sum_j_ * sum_je_) / det;
  const double mu1 = (n * sum_je_ - sum_j_ * sum_e_) / det;
  return {mu0, mu1};
}

double RecursiveTrendState::detrended(double eps_tilde, long index) {
  update(eps_tilde, index);
  const auto [mu0, mu1] = trend();
  return eps_tilde - mu0 - mu1 * static_cast<double>(index);
}

}  // namespace seqcoint
