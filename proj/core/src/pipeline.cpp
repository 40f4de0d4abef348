#include "seqcoint/pipeline.hpp"

#include "seqcoint/csv.hpp"
#include "seqcoint/errors.hpp"

namespace seqcoint {

DataFrameIn load_dataframe(const std::string& path) {
  const csv::Table table = csv::read(path);
  const int y_col = table.column("y");

  std::vector<int> x_cols;
  for (int j = 1; table.find_column("x" + std::to_string(j)) >= 0; ++j)
    x_cols.push_back(table.column("x" + std::to_string(j)));
  if (x_cols.empty()) throw io_error(path + ": no x1..xp columns found");

  int label_col = table.find_column("date");
  if (label_col < 0 && !table.header.empty()) {
    const std::string& first = table.header.front();
    if (first != "y" && first.rfind("x", 0) != 0) label_col = 0;
  }

  const int t = static_cast<int>(table.rows.size());
  if (t == 0) throw io_error(path + ": no data rows");
  DataFrameIn frame;
  frame.y.resize(t);
  frame.x.resize(t, static_cast<int>(x_cols.size()));
  if (label_col >= 0) {
    frame.label_name = table.header[static_cast<std::size_t>(label_col)];
    frame.labels.reserve(static_cast<std::size_t>(t));
  }
  for (int i = 0; i < t; ++i) {
    frame.y(i) = table.number(i, y_col);
    for (std::size_t j = 0; j < x_cols.size(); ++j)
      frame.x(i, static_cast<int>(j)) = table.number(i, x_cols[j]);
    if (label_col >= 0) frame.labels.push_back(table.cell(i, label_col));
  }
  return frame;
}

MonitorRunOutput monitor_dataframe(const DataFrameIn& frame, MonitorConfig cfg,
                                   const std::string& trace_path) {
  if (frame.rows() < cfg.m + 1)
    throw config_error("monitor_dataframe: need at least m + 1 rows, got " +
                       std::to_string(frame.rows()) + " with m = " + std::to_string(cfg.m));
  cfg.horizon = frame.rows() - cfg.m;

  MonitorRunOutput out;
  out.report = Monitor::run(frame.x, frame.y, cfg, std::nullopt, !trace_path.empty());
  if (!trace_path.empty()) {
    Monitor::write_trace_csv(out.report.trace, trace_path);
    out.report.trace.clear();
  }
  if (!frame.labels.empty()) {
    const long row = out.report.k_hat_abs - 1;  // 1-based index to row
    if (row >= 0 && row < frame.rows())
      out.k_hat_label = frame.labels[static_cast<std::size_t>(row)];
  }
  return out;
}

}  // namespace seqcoint
