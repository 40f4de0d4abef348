#include "seqcoint/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "seqcoint/csv.hpp"
#include "seqcoint/errors.hpp"
#include "seqcoint/rng.hpp"

namespace seqcoint {

double nu_star(long m, long k, double eta) {
  if (m < 1 || k < 1) throw std::domain_error("nu_star: need m >= 1, k >= 1");
  if (!(eta >= 0.0 && eta <= 0.5)) throw std::domain_error("nu_star: need eta in [0, 1/2]");
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double base = std::sqrt(md) * (1.0 + kd / md);
  if (eta == 0.0) return base;
  return base * std::pow(kd / (md + kd), eta);
}

CriticalValue crit_gumbel(double alpha, long m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("crit_gumbel: need 0 < alpha < 1");
  if (m < 16) throw std::domain_error("crit_gumbel: need m >= 16 for iterated logarithms");
  const double loglog = std::log(std::log(static_cast<double>(m)));
  const double a_m = std::sqrt(2.0 * loglog);
  const double d_m = 2.0 * loglog + 0.5 * std::log(loglog) - 0.5 * std::log(std::numbers::pi);
  CriticalValue crit;
  crit.eta = 0.5;
  crit.alpha = alpha;
  crit.value = (d_m - std::log(-std::log1p(-alpha))) / a_m;
  crit.source = CritSource::GumbelFormula;
  return crit;
}

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("SEQCOINT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Empirical (1-alpha) quantile: order statistic at ceil((1-alpha) n).
double quantile(std::vector<double> sorted_copy, double alpha) {
  std::sort(sorted_copy.begin(), sorted_copy.end());
  const double n = static_cast<double>(sorted_copy.size());
  long idx = static_cast<long>(std::ceil((1.0 - alpha) * n)) - 1;
  idx = std::clamp<long>(idx, 0, static_cast<long>(sorted_copy.size()) - 1);
  return sorted_copy[static_cast<std::size_t>(idx)];
}

}  // namespace

std::vector<CriticalValue> crit_sim_multi(std::span<const double> etas,
                                          std::span<const double> alphas, long n_paths,
                                          long grid_size, std::uint64_t seed, int threads) {
  for (double eta : etas)
    if (!(eta >= 0.0 && eta < 0.5))
      throw std::domain_error("crit_sim: need eta in [0, 1/2); eta = 1/2 has the Gumbel formula");
  for (double alpha : alphas)
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("crit_sim: need 0 < alpha < 1");
  if (n_paths < 1 || grid_size < 1) throw std::domain_error("crit_sim: need paths, grid >= 1");

  const std::size_t n_eta = etas.size();
  const double step_sd = std::sqrt(1.0 / static_cast<double>(grid_size));

  // t^(-eta) per grid node, shared across paths.
  std::vector<std::vector<double>> inv_t_eta(n_eta,
                                             std::vector<double>(static_cast<std::size_t>(grid_size)));
  for (std::size_t e = 0; e < n_eta; ++e)
    for (long i = 1; i <= grid_size; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(grid_size);
      inv_t_eta[e][static_cast<std::size_t>(i - 1)] =
          etas[e] == 0.0 ? 1.0 : std::pow(t, -etas[e]);
    }

  std::vector<std::vector<double>> sups(n_eta,
                                        std::vector<double>(static_cast<std::size_t>(n_paths)));
  rng::Stream base(rng::derive(seed, static_cast<std::uint64_t>(rng::Role::BoundarySim)));

  auto worker = [&](long first, long last) {
    std::vector<double> path_sup(n_eta);
    for (long p = first; p < last; ++p) {
      rng::Stream stream = base.substream(static_cast<std::uint64_t>(p));
      std::fill(path_sup.begin(), path_sup.end(), 0.0);
      double b = 0.0;
      for (long i = 1; i <= grid_size; ++i) {
        b += step_sd * stream.normal();
        const double ab = std::abs(b);
        for (std::size_t e = 0; e < n_eta; ++e) {
          const double value = ab * inv_t_eta[e][static_cast<std::size_t>(i - 1)];
          if (value > path_sup[e]) path_sup[e] = value;
        }
      }
      for (std::size_t e = 0; e < n_eta; ++e) sups[e][static_cast<std::size_t>(p)] = path_sup[e];
    }
  };

  const int n_threads = std::min<long>(resolve_threads(threads), n_paths);
  if (n_threads <= 1) {
    worker(0, n_paths);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (n_paths + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const long first = t * chunk;
      const long last = std::min(n_paths, first + chunk);
      if (first < last) pool.emplace_back(worker, first, last);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<CriticalValue> out;
  out.reserve(n_eta * alphas.size());
  for (std::size_t e = 0; e < n_eta; ++e)
    for (double alpha : alphas) {
      CriticalValue crit;
      crit.eta = etas[e];
      crit.alpha = alpha;
      crit.value = quantile(sups[e], alpha);
      crit.source = CritSource::Simulated;
      crit.sim_paths = n_paths;
      crit.sim_grid = grid_size;
      crit.sim_seed = seed;
      out.push_back(crit);
    }
  return out;
}

CriticalValue crit_sim(double eta, double alpha, long n_paths, long grid_size,
                       std::uint64_t seed, int threads) {
  const double etas[] = {eta};
  const double alphas[] = {alpha};
  return crit_sim_multi(etas, alphas, n_paths, grid_size, seed, threads).front();
}

double boundary_value(long m, long k, const CriticalValue& crit) {
  return crit.value * nu_star(m, k, crit.eta);
}

CriticalValueTable CriticalValueTable::load_csv(const std::string& path) {
  const csv::Table table = csv::read(path);
  const int eta_col = table.column("eta");
  const int alpha_col = table.column("alpha");
  const int value_col = table.column("value");
  const int paths_col = table.column("n_paths");
  const int grid_col = table.column("grid_size");
  const int seed_col = table.column("seed");

  CriticalValueTable out;
  for (int i = 0; i < static_cast<int>(table.rows.size()); ++i) {
    CriticalValue crit;
    crit.eta = table.number(i, eta_col);
    crit.alpha = table.number(i, alpha_col);
    crit.value = table.number(i, value_col);
    crit.sim_paths = static_cast<long>(table.number(i, paths_col));
    crit.sim_grid = static_cast<long>(table.number(i, grid_col));
    crit.sim_seed = static_cast<std::uint64_t>(table.number(i, seed_col));
    crit.source = CritSource::Table;
    out.entries_.push_back(crit);
  }
  return out;
}

void CriticalValueTable::save_csv(const std::string& path) const {
  csv::Writer writer(path);
  writer.row({"eta", "alpha", "value", "n_paths", "grid_size", "seed"});
  for (const auto& crit : entries_) {
    writer.row({csv::format(crit.eta), csv::format(crit.alpha), csv::format(crit.value),
                std::to_string(crit.sim_paths), std::to_string(crit.sim_grid),
                std::to_string(crit.sim_seed)});
  }
}

std::optional<CriticalValue> CriticalValueTable::find(double eta, double alpha) const {
  for (const auto& crit : entries_)
    if (std::abs(crit.eta - eta) < 1e-12 && std::abs(crit.alpha - alpha) < 1e-12) return crit;
  return std::nullopt;
}

void CriticalValueTable::insert(const CriticalValue& value) {
  for (auto& crit : entries_) {
    if (std::abs(crit.eta - value.eta) < 1e-12 && std::abs(crit.alpha - value.alpha) < 1e-12) {
      crit = value;
      return;
    }
  }
  entries_.push_back(value);
}

}  // namespace seqcoint
