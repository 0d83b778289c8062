#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "phonon/sweep.hpp"

namespace phonon {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
  if (ec != std::errc{}) throw Error(ErrorCode::invalid_argument, "cannot format number");
  return {buf, end};
}

double parse_number(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorCode::invalid_argument, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string to_csv(const SweepResult& result) {
  std::string out;
  const auto header = result.header();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const SweepRow& row : result.rows) {
    for (double v : row.axis_values) {
      out += format_number(v);
      out += ',';
    }
    for (double v : row.outputs) {
      out += format_number(v);
      out += ',';
    }
    out += row.error;
    out += '\n';
  }
  return out;
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  const std::string text = to_csv(result);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::io_failure, "cannot open '" + path.string() + "' for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw Error(ErrorCode::io_failure, "failed writing '" + path.string() + "'");
}

namespace {
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}
}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::io_failure, "cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(file, line)) {
    if (first) {
      table.header = split_fields(line);
      first = false;
    } else {
      table.rows.push_back(split_fields(line));
    }
  }
  if (first) throw Error(ErrorCode::io_failure, "'" + path.string() + "' is empty");
  return table;
}

}  // namespace phonon
