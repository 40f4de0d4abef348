#pragma once

namespace seqcoint {

/// gamma = (1 - delta) / (theta - 1) with 0 < delta < 1 and theta > 1,
/// where the monitoring horizon grows like c0 * m^theta.
double gamma_rule(double delta, double theta);

/// Growth bound g(m;k) = [(m+k) + ((m+k)/m)^2]^(1+gamma).
double g_bound(long m, long k, double gamma);

/// The transform of psi = Q/g, kept entirely in the log domain: psi_tilde =
/// exp(1/psi) - 1 exceeds exp(m^gamma) under the null and would overflow any
/// fixed-width float, so consumers only ever see log(psi_tilde).
struct PsiValue {
  double a = 0.0;             // 1/psi = g/Q; +inf when saturated
  double log_psi_tilde = 0.0; // log(exp(a) - 1); +inf when saturated
  bool saturated = false;     // Q == 0
};

/// pre: g > 0. Saturation (Q == 0) is a valid state, not an error.
PsiValue psi_transform(double q, double g);

/// Running Q(m;k) = |sum eps_hat^2| / sigma2. The same accumulator serves the
/// plain and detrended pipelines; only the residual source differs.
class QAccumulator {
 public:
  explicit QAccumulator(double sigma2);
  /// Adds eps_hat (squared internally) and returns the updated Q.
  double add(double eps_hat);
  double value() const;

 private:
  double sigma2_;
  double numerator_ = 0.0;
};

}  // namespace seqcoint
