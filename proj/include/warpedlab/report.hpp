#pragma once

#include <string>
#include <vector>

namespace warpedlab {

// %.17g rendering: doubles round-trip exactly and identical inputs give
// byte-identical report files.
std::string format_number(double v);

// Create the directory (and parents) if missing.
void ensure_directory(const std::string& path);

// Write via a temp file in the same directory plus rename, so readers never
// observe a half-written report.
void write_text_atomic(const std::string& path, const std::string& content);

// CSV report: '#' preamble lines carrying the artifact version and the full
// config echo, one header row, then %.17g cells.
class CsvReport {
 public:
  CsvReport(const std::string& config_echo_json, const std::string& version);
  void comment(const std::string& line);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  // A row with a leading textual cell (labels, modes, generator names).
  void labeled_row(const std::string& label, const std::vector<double>& values);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const { write_text_atomic(path, text_); }

 private:
  std::string text_;
  std::size_t columns_ = 0;
};

}  // namespace warpedlab
