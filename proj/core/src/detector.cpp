#include "seqcoint/detector.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqcoint/errors.hpp"

namespace seqcoint {

double gamma_rule(double delta, double theta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("gamma_rule: need 0 < delta < 1");
  if (!(theta > 1.0)) throw std::domain_error("gamma_rule: need theta > 1");
  return (1.0 - delta) / (theta - 1.0);
}

double g_bound(long m, long k, double gamma) {
  if (m < 1 || k < 1) throw std::domain_error("g_bound: need m >= 1, k >= 1");
  if (gamma < 0.0) throw std::domain_error("g_bound: need gamma >= 0");
  const double mk = static_cast<double>(m + k);
  const double ratio = mk / static_cast<double>(m);
  return std::pow(mk + ratio * ratio, 1.0 + gamma);
}

PsiValue psi_transform(double q, double g) {
  if (!(g > 0.0)) throw std::domain_error("psi_transform: need g > 0");
  if (q < 0.0) throw std::domain_error("psi_transform: need Q >= 0");
  PsiValue value;
  if (q == 0.0) {
    value.a = std::numeric_limits<double>::infinity();
    value.log_psi_tilde = std::numeric_limits<double>::infinity();
    value.saturated = true;
    return value;
  }
  value.a = g / q;
  // log(exp(a) - 1) = a + log(1 - exp(-a)); -expm1(-a) keeps small a accurate.
  value.log_psi_tilde = value.a + std::log(-std::expm1(-value.a));
  value.saturated = false;
  return value;
}

QAccumulator::QAccumulator(double sigma2) : sigma2_(sigma2) {
  if (!(sigma2 > 0.0)) throw config_error("QAccumulator: need sigma2 > 0");
}

double QAccumulator::add(double eps_hat) {
  numerator_ += eps_hat * eps_hat;
  return value();
}

double QAccumulator::value() const { return std::abs(numerator_) / sigma2_; }

}  // namespace seqcoint
