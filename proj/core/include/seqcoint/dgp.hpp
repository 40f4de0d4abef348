#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "seqcoint/rng.hpp"

namespace seqcoint {

enum class BreakMode { None, SlopeBreak, CointBreak, LocalSlope, LocalCoint };

std::string to_string(BreakMode mode);
BreakMode break_mode_from_string(const std::string& name);

/// Named magnitude preset scale * m^(-exponent) for local-to-null breaks.
struct RateFunction {
  double scale = 1.0;
  double exponent = 0.0;
  double operator()(int m) const { return scale * std::pow(static_cast<double>(m), -exponent); }
};

/// Full description of a synthetic data-generating process.
///
/// Indices are 1-based in the model equations; k_star is the absolute break
/// index with k_star == t_total meaning "no break".
struct DgpSpec {
  int p = 1;
  int t_total = 0;       // T
  int m_calib = 0;       // m
  double rho_x = 0.0;    // AR(1) coefficient of u_i
  double rho_eps = 0.0;  // AR(1) coefficient of the stationary error
  double rho_xeps = 0.0; // endogeneity coupling
  double sigma_u2 = 2.0; // innovation variance of v^u (signal-to-noise)
  double mu0 = 0.0;
  double mu1 = 0.0;
  Eigen::VectorXd beta;        // p, defaults to ones
  BreakMode break_mode = BreakMode::None;
  Eigen::VectorXd delta_beta;  // p, slope shift (direction for LocalSlope)
  RateFunction local_rate;     // magnitude vs m for Local* modes
  int k_star = 0;              // absolute; == t_total means no break
  std::uint64_t seed = 0;

  /// Throws config_error on violated invariants.
  void validate() const;

  Eigen::VectorXd beta_or_default() const;
  Eigen::VectorXd delta_or_default() const;
};

/// AR recursions are warmed up over this many discarded draws so the
/// stationary initialisation is approximate but seed-stable.
inline constexpr int kBurnIn = 500;

struct RegressorPath {
  Eigen::MatrixXd x;    // T x p, x_i = x_{i-1} + u_i with x_0 = 0
  Eigen::MatrixXd v_u;  // (kBurnIn + T) x p raw innovations, burn-in rows first
};

struct GeneratedSample {
  Eigen::VectorXd y;    // T
  Eigen::MatrixXd x;    // T x p
  Eigen::VectorXd eps;  // latent errors, retained for diagnostics
  int k_star = 0;

  int length() const { return static_cast<int>(y.size()); }
  int regressors() const { return static_cast<int>(x.cols()); }
};

/// u_i = rho_x u_{i-1} + v^u_i; x is the cumulative sum of u from x_0 = 0.
/// Raw v^u (including burn-in rows) is returned so the error generator can
/// reuse it for endogeneity.
RegressorPath gen_regressors(const DgpSpec& spec, rng::Stream& stream);

/// Standardised stationary error: eps*_i = rho_eps eps*_{i-1} + v^e_i +
/// rho_xeps sum_j v^u_ij, scaled so Var(eps_i) = 1 in stationarity.
Eigen::VectorXd gen_errors(const DgpSpec& spec, const Eigen::MatrixXd& v_u,
                           rng::Stream& stream);

/// Applies the configured break mode and assembles
/// y_i = mu0 + mu1 i + beta_i' x_i + eps_i.
GeneratedSample apply_alternative(const RegressorPath& path, const Eigen::VectorXd& eps,
                                  const DgpSpec& spec, rng::Stream& extra_stream);

/// Convenience wrapper deriving role substreams from spec.seed.
GeneratedSample generate(const DgpSpec& spec);

/// CSV with columns index,y,x1..xp,eps,regime_flag (regime_flag = 1 after k*).
void write_sample_csv(const GeneratedSample& sample, const std::string& path);
GeneratedSample read_sample_csv(const std::string& path);

}  // namespace seqcoint
