#include "starkbeat/output.hpp"

#include <cstdio>
#include <ostream>

namespace starkbeat::output {

std::string format_double(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& command,
                     const config::RunConfig& cfg)
    : out_(out), precision_(cfg.output.precision) {
  out_ << "# starkbeat " << kVersion << "\n";
  out_ << "# command: " << command << "\n";
  for (const auto& [key, value] : config::flatten(cfg, 17))
    out_ << "# " << key << " = " << value << "\n";
}

void CsvWriter::comment(const std::string& text) {
  out_ << "# " << text << "\n";
}

void CsvWriter::columns(const std::vector<std::string>& names) {
  for (size_t i = 0; i < names.size(); ++i)
    out_ << (i ? "," : "") << names[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << fmt(values[i]);
  out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i)
    out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

std::string CsvWriter::fmt(double v) const {
  return format_double(v, precision_);
}

}  // namespace starkbeat::output
