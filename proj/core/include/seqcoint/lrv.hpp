#pragma once

#include <span>
#include <vector>

namespace seqcoint {

struct LrvEstimate {
  double sigma2 = 0.0;
  int bandwidth = 0;
  std::vector<double> rho_hat;  // lags 0..H
};

/// rho_hat_l = (1/m) sum_{i=l+1}^{m} e_i e_{i-l}; divisor m, not m-l.
/// pre: 0 <= lag < m (std::domain_error otherwise).
double autocov(std::span<const double> e, int lag);

/// Bartlett weighted sum of autocovariances,
/// sigma2 = rho_0 + 2 sum_{l=1}^{H} (1 - l/(H+1)) rho_l.
/// Throws estimation_error when the estimate is degenerate (<= 1e-12).
LrvEstimate bartlett_lrv(std::span<const double> e, int bandwidth);

/// H = floor(m^(1/6)), computed exactly in integers.
int default_bandwidth(int m);

}  // namespace seqcoint
