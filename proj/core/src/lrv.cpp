#include "seqcoint/lrv.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "seqcoint/errors.hpp"

namespace seqcoint {

double autocov(std::span<const double> e, int lag) {
  const int m = static_cast<int>(e.size());
  if (lag < 0 || lag >= m) throw std::domain_error("autocov: need 0 <= lag < m");
  double sum = 0.0;
  for (int i = lag; i < m; ++i) sum += e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i - lag)];
  return sum / static_cast<double>(m);
}

LrvEstimate bartlett_lrv(std::span<const double> e, int bandwidth) {
  const int m = static_cast<int>(e.size());
  if (bandwidth < 0 || bandwidth >= m)
    throw std::domain_error("bartlett_lrv: need 0 <= H < m");

  LrvEstimate est;
  est.bandwidth = bandwidth;
  est.rho_hat.resize(static_cast<std::size_t>(bandwidth) + 1);
  est.rho_hat[0] = autocov(e, 0);
  est.sigma2 = est.rho_hat[0];
  for (int l = 1; l <= bandwidth; ++l) {
    est.rho_hat[static_cast<std::size_t>(l)] = autocov(e, l);
    const double weight = 1.0 - static_cast<double>(l) / (bandwidth + 1.0);
    est.sigma2 += 2.0 * weight * est.rho_hat[static_cast<std::size_t>(l)];
  }
  if (est.sigma2 <= 1e-12) {
    std::ostringstream msg;
    msg << "degenerate long-run variance " << est.sigma2 << " at m=" << m
        << ", H=" << bandwidth;
    throw estimation_error(msg.str());
  }
  return est;
}

int default_bandwidth(int m) {
  if (m < 1) throw std::domain_error("default_bandwidth: need m >= 1");
  int h = static_cast<int>(std::floor(std::pow(static_cast<double>(m), 1.0 / 6.0)));
  // integer-exact floor of m^(1/6): fix any float rounding at sixth powers
  auto pow6_leq = [m](long v) {
    long acc = 1;
    for (int i = 0; i < 6; ++i) {
      acc *= v;
      if (acc > m) return false;
    }
    return acc <= m;
  };
  while (pow6_leq(h + 1)) ++h;
  while (h > 1 && !pow6_leq(h)) --h;
  return h < 1 ? 1 : h;
}

}  // namespace seqcoint
