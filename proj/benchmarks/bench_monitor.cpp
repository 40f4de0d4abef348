#include <benchmark/benchmark.h>

#include <vector>

#include "seqcoint/boundary.hpp"
#include "seqcoint/dgp.hpp"
#include "seqcoint/lrv.hpp"
#include "seqcoint/monitor.hpp"
#include "seqcoint/randomizer.hpp"

using namespace seqcoint;

static void BM_ThetaStat(benchmark::State& state) {
  const QuadratureRule rule = gh_rule(2);
  PsiValue psi;
  psi.a = 2.0;
  psi.log_psi_tilde = 12.0;
  psi.saturated = false;
  const int replicates = static_cast<int>(state.range(0));
  rng::Stream master(1);
  std::uint64_t k = 0;
  for (auto _ : state) {
    rng::Stream sub = master.substream(++k);
    benchmark::DoNotOptimize(theta_stat(psi, replicates, rule, sub));
  }
  state.SetItemsProcessed(state.iterations() * replicates);
}
BENCHMARK(BM_ThetaStat)->Arg(100)->Arg(200)->Arg(400);

static void BM_BartlettLrv(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  rng::Stream stream(2);
  std::vector<double> e(static_cast<std::size_t>(m));
  for (auto& v : e) v = stream.normal();
  const int h = default_bandwidth(m);
  for (auto _ : state) benchmark::DoNotOptimize(bartlett_lrv(e, h).sigma2);
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_BartlettLrv)->Arg(100)->Arg(400)->Arg(1600);

static void BM_MonitorRun(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const int m = t / 2;
  DgpSpec spec;
  spec.t_total = t;
  spec.m_calib = m;
  spec.k_star = t;
  spec.seed = 3;
  const GeneratedSample sample = generate(spec);

  MonitorConfig cfg;
  cfg.m = m;
  cfg.horizon = t - m;
  cfg.eta = 0.45;
  cfg.gamma = 0.45;
  CriticalValue crit;
  crit.eta = 0.45;
  crit.alpha = 0.05;
  crit.value = 2.785;
  cfg.critical = crit;
  for (auto _ : state) {
    cfg.seed += 1;
    benchmark::DoNotOptimize(Monitor::run(sample.x, sample.y, cfg));
  }
  state.SetItemsProcessed(state.iterations() * (t - m));
}
BENCHMARK(BM_MonitorRun)->Arg(200)->Arg(400);

static void BM_BrownianSupQuantile(benchmark::State& state) {
  const long paths = state.range(0);
  std::uint64_t seed = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(crit_sim(0.45, 0.05, paths, 500, ++seed, 1).value);
  }
  state.SetItemsProcessed(state.iterations() * paths * 500);
}
BENCHMARK(BM_BrownianSupQuantile)->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
