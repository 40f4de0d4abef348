#include "seqcoint/dgp.hpp"

#include <sstream>

#include "seqcoint/csv.hpp"
#include "seqcoint/errors.hpp"

namespace seqcoint {

std::string to_string(BreakMode mode) {
  switch (mode) {
    case BreakMode::None: return "none";
    case BreakMode::SlopeBreak: return "slope";
    case BreakMode::CointBreak: return "coint";
    case BreakMode::LocalSlope: return "local-slope";
    case BreakMode::LocalCoint: return "local-coint";
  }
  return "none";
}

BreakMode break_mode_from_string(const std::string& name) {
  if (name == "none") return BreakMode::None;
  if (name == "slope") return BreakMode::SlopeBreak;
  if (name == "coint") return BreakMode::CointBreak;
  if (name == "local-slope") return BreakMode::LocalSlope;
  if (name == "local-coint") return BreakMode::LocalCoint;
  throw config_error("unknown break mode '" + name + "'");
}

Eigen::VectorXd DgpSpec::beta_or_default() const {
  if (beta.size() == 0) return Eigen::VectorXd::Ones(p);
  return beta;
}

Eigen::VectorXd DgpSpec::delta_or_default() const {
  if (delta_beta.size() == 0) return Eigen::VectorXd::Zero(p);
  return delta_beta;
}

void DgpSpec::validate() const {
  if (p < 1) throw config_error("DgpSpec: p must be >= 1");
  if (!(m_calib >= 1 && m_calib < t_total))
    throw config_error("DgpSpec: need 1 <= m < T");
  if (!(k_star >= m_calib && k_star <= t_total))
    throw config_error("DgpSpec: need m <= k_star <= T");
  if (!(rho_x >= 0.0 && rho_x < 1.0))
    throw config_error("DgpSpec: rho_x must be in [0,1)");
  if (!(rho_eps >= 0.0 && rho_eps <= 1.0))
    throw config_error("DgpSpec: rho_eps must be in [0,1]");
  if (rho_eps == 1.0 && break_mode != BreakMode::CointBreak)
    throw config_error("DgpSpec: rho_eps = 1 only arises via break_mode = coint");
  if (!(sigma_u2 > 0.0)) throw config_error("DgpSpec: sigma_u2 must be > 0");
  if (beta.size() != 0 && beta.size() != p)
    throw config_error("DgpSpec: beta must have p entries");
  if (delta_beta.size() != 0 && delta_beta.size() != p)
    throw config_error("DgpSpec: delta_beta must have p entries");
  if ((break_mode == BreakMode::SlopeBreak || break_mode == BreakMode::CointBreak ||
       break_mode == BreakMode::LocalSlope || break_mode == BreakMode::LocalCoint) &&
      k_star < m_calib)
    throw config_error("DgpSpec: break must lie in the monitoring horizon");
}

RegressorPath gen_regressors(const DgpSpec& spec, rng::Stream& stream) {
  spec.validate();
  const int total = kBurnIn + spec.t_total;
  const double sigma_u = std::sqrt(spec.sigma_u2);

  RegressorPath path;
  path.v_u.resize(total, spec.p);
  path.x.resize(spec.t_total, spec.p);

  for (int j = 0; j < spec.p; ++j) {
    double u = 0.0;  // u_0 = 0, burn-in washes the initialisation out
    double x = 0.0;
    for (int i = 0; i < total; ++i) {
      const double v = sigma_u * stream.normal();
      path.v_u(i, j) = v;
      u = spec.rho_x * u + v;
      if (i >= kBurnIn) {
        x += u;
        path.x(i - kBurnIn, j) = x;
      }
    }
  }
  return path;
}

Eigen::VectorXd gen_errors(const DgpSpec& spec, const Eigen::MatrixXd& v_u,
                           rng::Stream& stream) {
  spec.validate();
  if (spec.rho_eps == 1.0)
    throw config_error("gen_errors: rho_eps = 1 must be expressed via break_mode = coint");
  const int total = kBurnIn + spec.t_total;
  if (v_u.rows() != total || v_u.cols() != spec.p)
    throw config_error("gen_errors: v_u does not match spec dimensions");

  // Var(v^e + rho_xeps * 1'v^u) = 1 + rho_xeps^2 * p * sigma_u2, so the
  // stationary variance of eps* is that over (1 - rho_eps^2).
  const double innov_var = 1.0 + spec.rho_xeps * spec.rho_xeps *
                                     static_cast<double>(spec.p) * spec.sigma_u2;
  const double scale = std::sqrt((1.0 - spec.rho_eps * spec.rho_eps) / innov_var);

  Eigen::VectorXd eps(spec.t_total);
  double eps_star = 0.0;
  for (int i = 0; i < total; ++i) {
    double coupled = stream.normal();
    for (int j = 0; j < spec.p; ++j) coupled += spec.rho_xeps * v_u(i, j);
    eps_star = spec.rho_eps * eps_star + coupled;
    if (i >= kBurnIn) eps(i - kBurnIn) = eps_star * scale;
  }
  return eps;
}

GeneratedSample apply_alternative(const RegressorPath& path, const Eigen::VectorXd& eps,
                                  const DgpSpec& spec, rng::Stream& extra_stream) {
  spec.validate();
  const int t = spec.t_total;
  if (path.x.rows() != t || eps.size() != t)
    throw config_error("apply_alternative: inputs do not match spec dimensions");

  const Eigen::VectorXd beta = spec.beta_or_default();
  Eigen::VectorXd delta = spec.delta_or_default();
  if (spec.break_mode == BreakMode::LocalSlope) {
    if (delta.isZero()) delta = Eigen::VectorXd::Ones(spec.p);
    delta *= spec.local_rate(spec.m_calib);
  }

  GeneratedSample out;
  out.k_star = spec.k_star;
  out.x = path.x;
  out.eps = eps;
  out.y.resize(t);

  // Error-side alternatives first. The spurious random walk continues from
  // eps_{k*} with fresh i.i.d. N(0, sigma_u2) innovations.
  if (spec.break_mode == BreakMode::CointBreak) {
    const double sigma_u = std::sqrt(spec.sigma_u2);
    for (int i = spec.k_star; i < t; ++i)
      out.eps(i) = out.eps(i - 1) + sigma_u * extra_stream.normal();
  } else if (spec.break_mode == BreakMode::LocalCoint) {
    const double sigma_upsilon = spec.local_rate(spec.m_calib);
    double upsilon = 0.0;
    for (int i = spec.k_star; i < t; ++i) {
      upsilon += extra_stream.normal();
      out.eps(i) = sigma_upsilon * upsilon + eps(i);
    }
  }

  const bool slope_shift =
      spec.break_mode == BreakMode::SlopeBreak || spec.break_mode == BreakMode::LocalSlope;
  for (int i = 0; i < t; ++i) {
    const double idx = static_cast<double>(i + 1);
    double value = spec.mu0 + spec.mu1 * idx;
    const bool post_break = slope_shift && (i + 1) > spec.k_star;
    for (int j = 0; j < spec.p; ++j) {
      const double slope = post_break ? beta(j) + delta(j) : beta(j);
      value += slope * out.x(i, j);
    }
    value += out.eps(i);
    out.y(i) = value;
  }
  return out;
}

GeneratedSample generate(const DgpSpec& spec) {
  rng::Stream base(spec.seed);
  rng::Stream x_stream = base.substream(rng::Role::RegressorInnov);
  rng::Stream e_stream = base.substream(rng::Role::ErrorInnov);
  rng::Stream extra_stream = base.substream(rng::Role::BreakExtra);
  const RegressorPath path = gen_regressors(spec, x_stream);
  const Eigen::VectorXd eps = gen_errors(spec, path.v_u, e_stream);
  return apply_alternative(path, eps, spec, extra_stream);
}

void write_sample_csv(const GeneratedSample& sample, const std::string& path) {
  csv::Writer writer(path);
  std::vector<std::string> header{"index", "y"};
  for (int j = 1; j <= sample.regressors(); ++j) header.push_back("x" + std::to_string(j));
  header.push_back("eps");
  header.push_back("regime_flag");
  writer.row(header);
  for (int i = 0; i < sample.length(); ++i) {
    std::vector<std::string> row;
    row.push_back(std::to_string(i + 1));
    row.push_back(csv::format(sample.y(i)));
    for (int j = 0; j < sample.regressors(); ++j) row.push_back(csv::format(sample.x(i, j)));
    row.push_back(csv::format(sample.eps(i)));
    row.push_back((i + 1) > sample.k_star ? "1" : "0");
    writer.row(row);
  }
}

GeneratedSample read_sample_csv(const std::string& path) {
  const csv::Table table = csv::read(path);
  const int y_col = table.column("y");
  const int eps_col = table.column("eps");
  const int flag_col = table.column("regime_flag");
  std::vector<int> x_cols;
  for (int j = 1; table.find_column("x" + std::to_string(j)) >= 0; ++j)
    x_cols.push_back(table.column("x" + std::to_string(j)));
  if (x_cols.empty()) throw io_error(path + ": no x1..xp columns found");

  const int t = static_cast<int>(table.rows.size());
  GeneratedSample sample;
  sample.y.resize(t);
  sample.eps.resize(t);
  sample.x.resize(t, static_cast<int>(x_cols.size()));
  sample.k_star = t;
  bool break_seen = false;
  for (int i = 0; i < t; ++i) {
    sample.y(i) = table.number(i, y_col);
    sample.eps(i) = table.number(i, eps_col);
    for (std::size_t j = 0; j < x_cols.size(); ++j)
      sample.x(i, static_cast<int>(j)) = table.number(i, x_cols[j]);
    if (!break_seen && table.number(i, flag_col) != 0.0) {
      break_seen = true;
      sample.k_star = i;  // first flagged row has 1-based index i+1 = k*+1
    }
  }
  return sample;
}

}  // namespace seqcoint
