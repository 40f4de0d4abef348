#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqcoint {

enum class CritSource { GumbelFormula, Simulated, Table };

struct CriticalValue {
  double eta = 0.0;
  double alpha = 0.05;
  double value = 0.0;
  CritSource source = CritSource::Simulated;
  long sim_paths = 0;
  long sim_grid = 0;
  std::uint64_t sim_seed = 0;
};

/// nu*(m;k) = sqrt(m) (1 + k/m) (k/(m+k))^eta; eta = 0 drops the power term.
double nu_star(long m, long k, double eta);

/// Analytic critical value for eta = 1/2:
/// c = (D_m - log(-log(1-alpha))) / A_m with A_m = (2 log log m)^{1/2} and
/// D_m = 2 log log m + (1/2) log log log m - (1/2) log pi.
/// pre: m >= 16 so the iterated logarithms are positive.
CriticalValue crit_gumbel(double alpha, long m);

/// Simulated (1-alpha) quantile of sup_{t in (0,1]} |B(t)|/t^eta for
/// eta < 1/2. Brownian paths use N(0, 1/grid) increments on a uniform grid;
/// the sup runs over grid nodes t >= 1/grid. Deterministic for a fixed seed
/// with order-free path parallelism.
CriticalValue crit_sim(double eta, double alpha, long n_paths, long grid_size,
                       std::uint64_t seed, int threads = 0);

/// One pass over shared Brownian paths serving several (eta, alpha) pairs.
std::vector<CriticalValue> crit_sim_multi(std::span<const double> etas,
                                          std::span<const double> alphas, long n_paths,
                                          long grid_size, std::uint64_t seed,
                                          int threads = 0);

/// nu(m;k) = c * nu*(m;k).
double boundary_value(long m, long k, const CriticalValue& crit);

/// Persisted cache of simulated critical values,
/// CSV columns eta,alpha,value,n_paths,grid_size,seed.
class CriticalValueTable {
 public:
  static CriticalValueTable load_csv(const std::string& path);
  void save_csv(const std::string& path) const;

  std::optional<CriticalValue> find(double eta, double alpha) const;
  /// Inserts or replaces the row keyed by (eta, alpha).
  void insert(const CriticalValue& value);
  const std::vector<CriticalValue>& entries() const { return entries_; }

 private:
  std::vector<CriticalValue> entries_;
};

}  // namespace seqcoint
