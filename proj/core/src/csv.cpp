#include "seqcoint/csv.hpp"

#include <cstdio>
#include <sstream>

#include "seqcoint/errors.hpp"

namespace seqcoint::csv {

std::string format(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double parse_number(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    while (used < text.size() && (text[used] == ' ' || text[used] == '\r')) ++used;
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw io_error(context + ": non-numeric cell '" + text + "'");
  }
}

int Table::find_column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int Table::column(const std::string& name) const {
  const int idx = find_column(name);
  if (idx < 0) throw io_error(path + ": missing column '" + name + "'");
  return idx;
}

const std::string& Table::cell(int row, int col) const {
  return rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
}

double Table::number(int row, int col) const {
  std::ostringstream context;
  context << path << ":" << (row + 2) << " column " << header[static_cast<std::size_t>(col)];
  return parse_number(cell(row, col), context.str());
}

namespace {
std::vector<std::string> split_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}
}  // namespace

Table read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path + ": cannot open for reading");
  Table table;
  table.path = path;
  std::string line;
  if (!std::getline(in, line)) throw io_error(path + ": empty file");
  table.header = split_line(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected " << table.header.size()
          << " fields, got " << cells.size();
      throw io_error(msg.str());
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Writer::Writer(const std::string& path) : path_(path), out_(path) {
  if (!out_) throw io_error(path + ": cannot open for writing");
}

void Writer::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw io_error(path_ + ": write failed");
}

}  // namespace seqcoint::csv
