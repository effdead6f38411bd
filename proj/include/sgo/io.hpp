#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sgo::io {

/// Fixed 17-significant-digit, locale-independent float rendering. All CSV
/// and JSON output goes through this so identical runs are byte-identical.
std::string format_g17(double v);

/// Minimal streaming JSON writer: insertion order preserved, numbers
/// rendered via format_g17, two-space indentation, LF line ends.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  // keeps string literals away from the bool overload
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& value_raw(std::string_view v);
  std::string str() const { return out_; }

 private:
  void pre_value();
  void newline();
  std::string out_;
  std::vector<char> stack_;       // '{' or '['
  std::vector<bool> has_items_;
  bool pending_key_ = false;
};

std::string json_escape(std::string_view s);

/// One CSV table: header row then numeric rows rendered with format_g17.
/// Comma separator, LF line ends, no quoting (numeric content only).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace sgo::io
