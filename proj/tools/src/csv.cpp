#include "brpf/experiments/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace brpf::experiments {

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::string& path, std::initializer_list<std::string_view> header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (in_row_ > 0) out_ << ',';
  out_ << csv_escape(text);
  ++in_row_;
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(std::string_view(format_number(value))); }

CsvWriter& CsvWriter::cell(std::uint64_t value) { return cell(std::string_view(std::to_string(value))); }

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw std::logic_error("CSV row has " + std::to_string(in_row_) + " cells, header has " +
                           std::to_string(columns_));
  }
  out_ << "\r\n";
  in_row_ = 0;
  if (!out_) throw std::runtime_error("CSV write failed");
}

}  // namespace brpf::experiments
