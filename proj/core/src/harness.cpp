#include "seqcoint/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "seqcoint/csv.hpp"
#include "seqcoint/errors.hpp"
#include "seqcoint/monitor.hpp"

namespace seqcoint {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      items.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  items.push_back(current);
  for (auto& item : items) {
    const auto begin = item.find_first_not_of(" \t");
    const auto end = item.find_last_not_of(" \t");
    item = begin == std::string::npos ? "" : item.substr(begin, end - begin + 1);
  }
  std::erase(items, "");
  return items;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& key) {
  std::vector<double> values;
  for (const auto& item : split_list(text))
    values.push_back(csv::parse_number(item, "spec key " + key));
  return values;
}

std::vector<int> parse_ints(const std::string& text, const std::string& key) {
  std::vector<int> values;
  for (double v : parse_doubles(text, key)) values.push_back(static_cast<int>(v));
  return values;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("SEQCOINT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int ExperimentSpec::m_for(int t, const std::string& rule) const {
  if (rule == "T/4") return t / 4;
  if (rule == "T/2") return t / 2;
  throw config_error("ExperimentSpec: m rule must be T/4 or T/2, got '" + rule + "'");
}

int ExperimentSpec::k_star_for(int t, int m) const {
  if (break_mode == BreakMode::None) return t;
  if (kstar_rule == "m+T/4") return m + t / 4;
  if (kstar_rule.rfind("frac:", 0) == 0) {
    const double frac = csv::parse_number(kstar_rule.substr(5), "kstar_rule");
    return static_cast<int>(std::lround(frac * t));
  }
  throw config_error("ExperimentSpec: kstar_rule must be 'm+T/4' or 'frac:<f>'");
}

void ExperimentSpec::validate() const {
  if (t_list.empty()) throw config_error("ExperimentSpec: t_list is required");
  if (m_rules.empty()) throw config_error("ExperimentSpec: m_rules is required");
  if (reps < 1) throw config_error("ExperimentSpec: reps must be >= 1");
  if (eta_list.empty()) throw config_error("ExperimentSpec: eta_list is required");
  const bool slope = break_mode == BreakMode::SlopeBreak;
  if (slope && delta_beta_list.empty())
    throw config_error("ExperimentSpec: slope break needs delta_beta_list");
}

ExperimentSpec ExperimentSpec::parse(std::istream& in, const std::string& name) {
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << name << ":" << line_no << ": expected key = value";
      throw config_error(msg.str());
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "t_list") spec.t_list = parse_ints(value, key);
    else if (key == "m_rules") spec.m_rules = split_list(value);
    else if (key == "rho_x_list") spec.rho_x_list = parse_doubles(value, key);
    else if (key == "rho_eps_list") spec.rho_eps_list = parse_doubles(value, key);
    else if (key == "rho_xeps_list") spec.rho_xeps_list = parse_doubles(value, key);
    else if (key == "eta_list") spec.eta_list = parse_doubles(value, key);
    else if (key == "alpha") spec.alpha = csv::parse_number(value, key);
    else if (key == "gamma") spec.gamma = csv::parse_number(value, key);
    else if (key == "break") spec.break_mode = break_mode_from_string(value);
    else if (key == "delta_beta_list") spec.delta_beta_list = parse_doubles(value, key);
    else if (key == "sigma_u2") spec.sigma_u2 = csv::parse_number(value, key);
    else if (key == "quad_nodes") spec.quad_nodes = static_cast<int>(csv::parse_number(value, key));
    else if (key == "detrend")
      spec.detrend = value == "const-trend" ? DetrendMode::ConstTrend : DetrendMode::None;
    else if (key == "kstar_rule") spec.kstar_rule = value;
    else if (key == "reps") spec.reps = static_cast<int>(csv::parse_number(value, key));
    else if (key == "base_seed")
      spec.base_seed = static_cast<std::uint64_t>(csv::parse_number(value, key));
    else {
      std::ostringstream msg;
      msg << name << ":" << line_no << ": unknown spec key '" << key << "'";
      throw config_error(msg.str());
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path + ": cannot open spec file");
  return parse(in, path);
}

void ExperimentSpec::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw io_error(path + ": cannot open for writing");
  auto join_d = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + csv::format(v[i]);
    return s;
  };
  auto join_i = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
  };
  auto join_s = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  out << "t_list = " << join_i(t_list) << "\n"
      << "m_rules = " << join_s(m_rules) << "\n"
      << "rho_x_list = " << join_d(rho_x_list) << "\n"
      << "rho_eps_list = " << join_d(rho_eps_list) << "\n"
      << "rho_xeps_list = " << join_d(rho_xeps_list) << "\n"
      << "eta_list = " << join_d(eta_list) << "\n"
      << "alpha = " << csv::format(alpha) << "\n"
      << "gamma = " << csv::format(gamma) << "\n"
      << "break = " << to_string(break_mode) << "\n";
  if (!delta_beta_list.empty()) out << "delta_beta_list = " << join_d(delta_beta_list) << "\n";
  out << "sigma_u2 = " << csv::format(sigma_u2) << "\n"
      << "quad_nodes = " << quad_nodes << "\n"
      << "detrend = " << (detrend == DetrendMode::ConstTrend ? "const-trend" : "none") << "\n"
      << "kstar_rule = " << kstar_rule << "\n"
      << "reps = " << reps << "\n"
      << "base_seed = " << base_seed << "\n";
}

namespace {

struct RepOutcome {
  bool detected = false;
  long k_hat_abs = 0;
  double delay = 0.0;
};

struct CellPlan {
  CellKey key;
  DgpSpec dgp;
  std::vector<MonitorConfig> configs;  // one per eta
  bool aborted = false;
  std::string error;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const CriticalValueTable& critvals,
                                int threads) {
  spec.validate();
  const auto t_start = std::chrono::steady_clock::now();

  // Expand the grid; a configuration error aborts only its own cell.
  std::vector<CellPlan> plans;
  std::vector<double> deltas = spec.delta_beta_list;
  if (spec.break_mode == BreakMode::None || deltas.empty()) deltas = {0.0};
  for (int t : spec.t_list)
    for (const auto& rule : spec.m_rules)
      for (double rho_x : spec.rho_x_list)
        for (double rho_eps : spec.rho_eps_list)
          for (double rho_xeps : spec.rho_xeps_list)
            for (double delta : deltas) {
              CellPlan plan;
              try {
                const int m = spec.m_for(t, rule);
                const int k_star = spec.k_star_for(t, m);
                plan.key = CellKey{t, m, rho_x, rho_eps, rho_xeps, delta, spec.break_mode, k_star};

                plan.dgp.p = 1;
                plan.dgp.t_total = t;
                plan.dgp.m_calib = m;
                plan.dgp.rho_x = rho_x;
                plan.dgp.rho_eps = rho_eps;
                plan.dgp.rho_xeps = rho_xeps;
                plan.dgp.sigma_u2 = spec.sigma_u2;
                plan.dgp.break_mode = spec.break_mode;
                plan.dgp.k_star = k_star;
                if (spec.break_mode == BreakMode::SlopeBreak) {
                  plan.dgp.delta_beta = Eigen::VectorXd::Constant(1, delta);
                }
                plan.dgp.validate();

                for (double eta : spec.eta_list) {
                  MonitorConfig cfg;
                  cfg.m = m;
                  cfg.horizon = t - m;
                  cfg.eta = eta;
                  cfg.alpha = spec.alpha;
                  cfg.gamma = spec.gamma;
                  cfg.quad_nodes = spec.quad_nodes;
                  cfg.detrend = spec.detrend;
                  if (eta < 0.5) {
                    const auto crit = critvals.find(eta, spec.alpha);
                    if (!crit) {
                      std::ostringstream msg;
                      msg << "no critical value for eta=" << eta << ", alpha=" << spec.alpha
                          << " (run the critvals command)";
                      throw config_error(msg.str());
                    }
                    cfg.critical = *crit;
                  }
                  cfg.validate();
                  plan.configs.push_back(cfg);
                }
              } catch (const std::exception& ex) {
                plan.aborted = true;
                plan.error = ex.what();
              }
              plans.push_back(std::move(plan));
            }

  const std::size_t n_eta = spec.eta_list.size();
  const std::size_t n_cells = plans.size();
  std::vector<std::vector<RepOutcome>> outcomes(n_cells * n_eta);
  for (auto& v : outcomes) v.resize(static_cast<std::size_t>(spec.reps));

  // One task per (cell, replication). Seeds derive from
  // (base_seed, cell, replication) with role substreams below, so the task
  // execution order never matters.
  auto run_rep = [&](std::size_t cell_idx, int rep) {
    const CellPlan& plan = plans[cell_idx];
    DgpSpec dgp = plan.dgp;
    dgp.seed = rng::derive(spec.base_seed, cell_idx, static_cast<std::uint64_t>(rep));
    const GeneratedSample sample = generate(dgp);
    const std::uint64_t monitor_seed =
        rng::derive(dgp.seed, static_cast<std::uint64_t>(rng::Role::Randomizer));
    const bool has_break = spec.break_mode != BreakMode::None;
    for (std::size_t e = 0; e < n_eta; ++e) {
      MonitorConfig cfg = plan.configs[e];
      cfg.seed = monitor_seed;
      const DetectionReport report = Monitor::run(
          sample.x, sample.y, cfg,
          has_break ? std::optional<long>(plan.key.k_star) : std::nullopt);
      RepOutcome& out = outcomes[cell_idx * n_eta + e][static_cast<std::size_t>(rep)];
      out.detected = report.detected;
      out.k_hat_abs = report.k_hat_abs;
      out.delay = report.delay.value_or(0.0);
    }
  };

  std::vector<std::size_t> active_cells;
  for (std::size_t c = 0; c < n_cells; ++c)
    if (!plans[c].aborted) active_cells.push_back(c);

  const long n_tasks = static_cast<long>(active_cells.size()) * spec.reps;
  const int n_threads = resolve_threads(threads);
  if (n_threads <= 1 || n_tasks <= 1) {
    for (std::size_t c : active_cells)
      for (int rep = 0; rep < spec.reps; ++rep) run_rep(c, rep);
  } else {
    std::atomic<long> next{0};
    auto worker = [&] {
      while (true) {
        const long task = next.fetch_add(1);
        if (task >= n_tasks) break;
        const std::size_t c = active_cells[static_cast<std::size_t>(task / spec.reps)];
        run_rep(c, static_cast<int>(task % spec.reps));
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.spec = spec;
  for (std::size_t c = 0; c < n_cells; ++c) {
    for (std::size_t e = 0; e < n_eta; ++e) {
      CellResult cell;
      cell.key = plans[c].key;
      cell.eta = spec.eta_list[e];
      cell.reps = spec.reps;
      if (plans[c].aborted) {
        cell.error = plans[c].error;
        result.cells.push_back(std::move(cell));
        continue;
      }
      const auto& reps = outcomes[c * n_eta + e];
      const bool has_break = plans[c].key.break_mode != BreakMode::None;
      double delay_sum = 0.0;
      for (const auto& rep : reps) {
        if (!rep.detected) continue;
        ++cell.detections;
        cell.k_hat_abs.push_back(rep.k_hat_abs);
        if (has_break) {
          cell.delays.push_back(rep.delay);
          delay_sum += rep.delay;
        }
      }
      cell.rejection_freq = static_cast<double>(cell.detections) / spec.reps;
      cell.mean_delay = cell.delays.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : delay_sum / static_cast<double>(cell.delays.size());
      result.cells.push_back(std::move(cell));
    }
  }
  result.total_runtime_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

namespace {
nlohmann::json cell_to_json(const CellResult& cell) {
  nlohmann::json j;
  j["t"] = cell.key.t;
  j["m"] = cell.key.m;
  j["rho_x"] = cell.key.rho_x;
  j["rho_eps"] = cell.key.rho_eps;
  j["rho_xeps"] = cell.key.rho_xeps;
  j["delta_beta"] = cell.key.delta_beta;
  j["break"] = to_string(cell.key.break_mode);
  j["k_star"] = cell.key.k_star;
  j["eta"] = cell.eta;
  j["reps"] = cell.reps;
  j["detections"] = cell.detections;
  j["rejection_freq"] = cell.rejection_freq;
  if (!cell.delays.empty()) j["mean_delay"] = cell.mean_delay;
  j["delays"] = cell.delays;
  j["k_hat_abs"] = cell.k_hat_abs;
  j["error"] = cell.error;
  return j;
}

CellResult cell_from_json(const nlohmann::json& j) {
  CellResult cell;
  cell.key.t = j.at("t").get<int>();
  cell.key.m = j.at("m").get<int>();
  cell.key.rho_x = j.at("rho_x").get<double>();
  cell.key.rho_eps = j.at("rho_eps").get<double>();
  cell.key.rho_xeps = j.at("rho_xeps").get<double>();
  cell.key.delta_beta = j.at("delta_beta").get<double>();
  cell.key.break_mode = break_mode_from_string(j.at("break").get<std::string>());
  cell.key.k_star = j.at("k_star").get<int>();
  cell.eta = j.at("eta").get<double>();
  cell.reps = j.at("reps").get<int>();
  cell.detections = j.at("detections").get<int>();
  cell.rejection_freq = j.at("rejection_freq").get<double>();
  cell.mean_delay = j.contains("mean_delay") ? j.at("mean_delay").get<double>()
                                             : std::numeric_limits<double>::quiet_NaN();
  cell.delays = j.at("delays").get<std::vector<double>>();
  cell.k_hat_abs = j.at("k_hat_abs").get<std::vector<long>>();
  cell.error = j.at("error").get<std::string>();
  return cell;
}
}  // namespace

void write_summary_csv(const ExperimentResult& result, const std::string& path) {
  csv::Writer writer(path);
  writer.row({"t", "m", "rho_x", "rho_eps", "rho_xeps", "break", "delta_beta", "k_star",
              "eta", "alpha", "gamma", "reps", "detections", "rejection_freq", "mean_delay",
              "error"});
  for (const auto& cell : result.cells) {
    writer.row({std::to_string(cell.key.t), std::to_string(cell.key.m),
                csv::format(cell.key.rho_x), csv::format(cell.key.rho_eps),
                csv::format(cell.key.rho_xeps), to_string(cell.key.break_mode),
                csv::format(cell.key.delta_beta), std::to_string(cell.key.k_star),
                csv::format(cell.eta), csv::format(result.spec.alpha),
                csv::format(result.spec.gamma), std::to_string(cell.reps),
                std::to_string(cell.detections), csv::format(cell.rejection_freq),
                !cell.delays.empty() ? csv::format(cell.mean_delay) : "",
                cell.error});
  }
}

void write_summary_json(const ExperimentResult& result, const std::string& path) {
  nlohmann::json j;
  j["alpha"] = result.spec.alpha;
  j["gamma"] = result.spec.gamma;
  j["reps"] = result.spec.reps;
  j["base_seed"] = result.spec.base_seed;
  j["total_runtime_sec"] = result.total_runtime_sec;
  j["cells"] = nlohmann::json::array();
  for (const auto& cell : result.cells) j["cells"].push_back(cell_to_json(cell));
  std::ofstream out(path);
  if (!out) throw io_error(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw io_error(path + ": write failed");
}

ExperimentResult read_summary_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path + ": cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw io_error(path + ": " + ex.what());
  }
  ExperimentResult result;
  result.spec.alpha = j.at("alpha").get<double>();
  result.spec.gamma = j.at("gamma").get<double>();
  result.spec.reps = j.at("reps").get<int>();
  result.spec.base_seed = j.at("base_seed").get<std::uint64_t>();
  result.total_runtime_sec = j.at("total_runtime_sec").get<double>();
  for (const auto& cell : j.at("cells")) result.cells.push_back(cell_from_json(cell));
  return result;
}

void write_histograms(const ExperimentResult& result, const std::string& directory) {
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& cell = result.cells[i];
    std::map<long, long> bins;
    for (long k : cell.k_hat_abs) ++bins[k];
    std::ostringstream name;
    name << directory << "/hist_cell" << i << "_eta" << cell.eta << ".csv";
    csv::Writer writer(name.str());
    writer.row({"k_hat_abs", "count"});
    for (const auto& [k, count] : bins)
      writer.row({std::to_string(k), std::to_string(count)});
  }
}

}  // namespace seqcoint
