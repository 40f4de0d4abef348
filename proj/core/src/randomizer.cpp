#include "seqcoint/randomizer.hpp"

#include <cmath>
#include <numbers>

#include "seqcoint/errors.hpp"

namespace seqcoint {

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
const double kSqrt2 = std::sqrt(2.0);

QuadratureRule make_rule(std::vector<double> nodes, std::vector<double> weights) {
  QuadratureRule rule;
  rule.nodes = std::move(nodes);
  rule.weights = std::move(weights);
  rule.norm_weights.reserve(rule.weights.size());
  rule.abscissae.reserve(rule.nodes.size());
  for (double w : rule.weights) rule.norm_weights.push_back(w / kSqrtPi);
  for (double z : rule.nodes) rule.abscissae.push_back(kSqrt2 * z);
  return rule;
}
}  // namespace

QuadratureRule gh_rule(int n_nodes) {
  switch (n_nodes) {
    case 1:
      return make_rule({0.0}, {kSqrtPi});
    case 2: {
      // H_2(z) = 4z^2 - 2: zeros +-1/sqrt(2), weights sqrt(pi)/2
      const double z = 1.0 / kSqrt2;
      return make_rule({-z, z}, {kSqrtPi / 2.0, kSqrtPi / 2.0});
    }
    case 4: {
      // H_4(z) = 16z^4 - 48z^2 + 12: zeros +-sqrt((3 -+ sqrt(6))/2)
      const double inner = std::sqrt((3.0 - std::sqrt(6.0)) / 2.0);
      const double outer = std::sqrt((3.0 + std::sqrt(6.0)) / 2.0);
      // w_s = sqrt(pi) 2^3 3! / (4 [H_3(z_s)]^2)
      auto weight = [](double z) {
        const double h3 = 8.0 * z * z * z - 12.0 * z;
        return kSqrtPi * 48.0 / (4.0 * h3 * h3);
      };
      return make_rule({-outer, -inner, inner, outer},
                       {weight(outer), weight(inner), weight(inner), weight(outer)});
    }
    default:
      throw config_error("gh_rule: supported node counts are 1, 2, 4");
  }
}

ThetaDraw theta_stat(const PsiValue& psi, int replicates, const QuadratureRule& rule,
                     rng::Stream& stream, long k) {
  if (replicates < 1) throw config_error("theta_stat: need R >= 1");
  if (rule.size() < 1) throw config_error("theta_stat: empty quadrature rule");

  // Step 2 threshold: zeta_j(u) = I(xi_j <= u * psi_tilde^{-1/2}), with
  // psi_tilde^{-1/2} = exp(-log_psi_tilde / 2). Saturation (psi_tilde
  // infinite) sends every threshold to zero.
  const int n_nodes = rule.size();
  std::vector<double> thresholds(static_cast<std::size_t>(n_nodes), 0.0);
  if (!psi.saturated) {
    const double factor = std::exp(-0.5 * psi.log_psi_tilde);
    for (int s = 0; s < n_nodes; ++s) {
      const double u = rule.abscissae[static_cast<std::size_t>(s)];
      thresholds[static_cast<std::size_t>(s)] = u == 0.0 ? 0.0 : u * factor;
    }
  }

  // Steps 1+3: one xi sample per k, reused across nodes.
  std::vector<long> counts(static_cast<std::size_t>(n_nodes), 0);
  for (int j = 0; j < replicates; ++j) {
    const double xi = stream.normal();
    for (int s = 0; s < n_nodes; ++s)
      if (xi <= thresholds[static_cast<std::size_t>(s)]) ++counts[static_cast<std::size_t>(s)];
  }

  // Step 4 via the quadrature rule.
  const double sqrt_r = std::sqrt(static_cast<double>(replicates));
  double theta = 0.0;
  for (int s = 0; s < n_nodes; ++s) {
    const double centred =
        static_cast<double>(counts[static_cast<std::size_t>(s)]) - 0.5 * replicates;
    const double vartheta = 2.0 / sqrt_r * centred;
    theta += rule.norm_weights[static_cast<std::size_t>(s)] * vartheta * vartheta;
  }

  ThetaDraw draw;
  draw.theta = theta;
  draw.k = k;
  draw.replicates = replicates;
  return draw;
}

int select_R(int m) {
  if (m < 1) throw config_error("select_R: need m >= 1");
  return m;
}

bool r_rate_violated(int replicates, int m, double gamma, double tolerance) {
  // R = m at the simulation scales gives R exp(-m^gamma) well below 0.1,
  // a 10m override well above it.
  const double rate = replicates * std::exp(-std::pow(static_cast<double>(m), gamma));
  return rate > tolerance;
}

}  // namespace seqcoint
