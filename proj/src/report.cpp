#include "warpedlab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace warpedlab {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_directory(const std::string& path) {
  if (path.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory '" + path + "': " + ec.message());
  }
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) ensure_directory(target.parent_path().string());
  const std::filesystem::path temp = target.parent_path() /
                                     (target.filename().string() + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + temp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to '" + temp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    throw std::runtime_error("cannot move report into place at '" + path +
                             "': " + ec.message());
  }
}

CsvReport::CsvReport(const std::string& config_echo_json, const std::string& version) {
  text_ += "# version ";
  text_ += version;
  text_ += "\n# config ";
  text_ += config_echo_json;
  text_ += "\n";
}

void CsvReport::comment(const std::string& line) {
  text_ += "# ";
  text_ += line;
  text_ += "\n";
}

void CsvReport::header(const std::vector<std::string>& names) {
  if (names.empty()) throw std::invalid_argument("CsvReport: empty header");
  columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) text_ += ",";
    text_ += names[i];
  }
  text_ += "\n";
}

void CsvReport::row(const std::vector<double>& values) {
  if (values.size() != columns_) {
    throw std::invalid_argument("CsvReport: row width does not match the header");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ",";
    text_ += format_number(values[i]);
  }
  text_ += "\n";
}

void CsvReport::labeled_row(const std::string& label, const std::vector<double>& values) {
  if (values.size() + 1 != columns_) {
    throw std::invalid_argument("CsvReport: row width does not match the header");
  }
  text_ += label;
  for (double v : values) {
    text_ += ",";
    text_ += format_number(v);
  }
  text_ += "\n";
}

}  // namespace warpedlab
