#pragma once

#include <vector>

#include "seqcoint/detector.hpp"
#include "seqcoint/rng.hpp"

namespace seqcoint {

/// Gauss-Hermite rule integrating the randomisation abscissa u against the
/// standard normal: effective abscissae are u_s = sqrt(2) z_s and the
/// normalised weights w_s / sqrt(pi) sum to one.
struct QuadratureRule {
  std::vector<double> nodes;          // z_s, zeros of the Hermite polynomial
  std::vector<double> weights;        // w_s, sum to sqrt(pi)
  std::vector<double> norm_weights;   // w_s / sqrt(pi)
  std::vector<double> abscissae;      // u_s = sqrt(2) z_s

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Supported node counts: 1, 2, 4. n=2 gives u = +-1 with weight 1/2 each.
QuadratureRule gh_rule(int n_nodes);

struct ThetaDraw {
  double theta = 0.0;  // in [0, R] for every input and every seed
  long k = 0;
  int replicates = 0;
};

/// One randomised statistic: draws the Bernoulli indicator sample once for
/// this k (stream must be the per-k substream), reuses it across quadrature
/// nodes, and integrates the squared centred sums with the rule's weights.
/// Thresholds are formed in the log domain so psi_tilde is never
/// materialised.
ThetaDraw theta_stat(const PsiValue& psi, int replicates, const QuadratureRule& rule,
                     rng::Stream& stream, long k = 0);

/// Default artificial sample size R = m.
int select_R(int m);

/// True when an override violates the relative-rate rule, i.e.
/// R * exp(-m^gamma) is not small; callers warn but accept the value.
bool r_rate_violated(int replicates, int m, double gamma, double tolerance = 0.1);

}  // namespace seqcoint
