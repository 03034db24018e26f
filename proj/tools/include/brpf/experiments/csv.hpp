#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace brpf::experiments {

/// Cell text for a double: shortest round-trip form, "NA" for NaN.
std::string format_number(double value);

/// RFC 4180 field quoting: fields with a comma, quote, CR or LF are wrapped
/// in quotes with inner quotes doubled.
std::string csv_escape(std::string_view field);

/// Writes a header row on construction and CRLF-terminated records.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string_view> header);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double value);
  CsvWriter& cell(std::uint64_t value);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace brpf::experiments
