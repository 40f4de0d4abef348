#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace seqcoint::csv {

/// Formats a double with enough digits to round-trip exactly.
std::string format(double value);

/// Parses a double; throws io_error naming the context on failure.
double parse_number(const std::string& text, const std::string& context);

struct Table {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name, -1 when absent.
  int find_column(const std::string& name) const;
  /// Column index by header name; throws io_error when absent.
  int column(const std::string& name) const;
  const std::string& cell(int row, int col) const;
  /// Numeric cell; io_error messages carry the 1-based data line number.
  double number(int row, int col) const;
};

/// Reads a comma-separated file with a header row. Fields are not quoted;
/// values must not contain commas.
Table read(const std::string& path);

class Writer {
 public:
  explicit Writer(const std::string& path);
  void row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace seqcoint::csv
