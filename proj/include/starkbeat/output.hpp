#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starkbeat/config.hpp"

namespace starkbeat::output {

inline constexpr const char* kVersion = "0.1.0";

/// CSV writer: `#`-prefixed header comments carrying the artifact version,
/// the command and the full resolved config, then a column-name row and
/// data rows. Comma separator, LF line endings, scientific notation with
/// the configured number of significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& command,
            const config::RunConfig& cfg);

  void comment(const std::string& text);
  void columns(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

  std::string fmt(double v) const;

 private:
  std::ostream& out_;
  int precision_;
};

/// Format a double with the given significant digits (%.{p}g).
std::string format_double(double v, int precision);

}  // namespace starkbeat::output
