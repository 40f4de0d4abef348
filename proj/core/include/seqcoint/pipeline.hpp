#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "seqcoint/monitor.hpp"

namespace seqcoint {

/// User-supplied series: a y column, regressors x1..xp, and optionally one
/// label column (named "date", or any first column that is neither y nor
/// x*). Labels are opaque and passed through; only row order matters.
struct DataFrameIn {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  std::vector<std::string> labels;  // empty when no label column
  std::string label_name;

  int rows() const { return static_cast<int>(y.size()); }
};

/// Parses a header-driven CSV; throws io_error with the line number on
/// malformed rows or non-numeric cells.
DataFrameIn load_dataframe(const std::string& path);

struct MonitorRunOutput {
  DetectionReport report;
  std::string k_hat_label;  // label at the stopping row, when labels exist
};

/// Monitors the data frame with cfg.m calibration rows and everything after
/// as the horizon (cfg.horizon is derived from the row count). Requires
/// rows >= m + 1.
MonitorRunOutput monitor_dataframe(const DataFrameIn& frame, MonitorConfig cfg,
                                   const std::string& trace_path = "");

}  // namespace seqcoint
