#include "rmt_cli/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rmt/errors.hpp"

namespace rmt::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  return buf;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw InputError("write_csv: header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw InputError("write_csv: ragged columns");
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file " + path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_double(columns[j][i]);
    out << '\n';
  }
  if (!out) throw InputError("failed writing " + path);
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open manifest file " + path);
  out << "command=" << m.command << '\n';
  for (const auto& [k, v] : m.parameters) out << "parameters." << k << '=' << v << '\n';
  for (std::size_t i = 0; i < m.outputs.size(); ++i) out << "outputs." << i << '=' << m.outputs[i] << '\n';
  out << "elapsed=" << format_double(m.elapsed) << '\n';
  out << "toolkit_version=" << m.toolkit_version << '\n';
}

void MarkdownTable::print(std::ostream& os) const {
  auto line = [&os](const std::vector<std::string>& cells) {
    os << '|';
    for (const auto& c : cells) os << ' ' << c << " |";
    os << '\n';
  };
  line(header_);
  os << '|';
  for (std::size_t j = 0; j < header_.size(); ++j) os << "---|";
  os << '\n';
  for (const auto& r : rows_) line(r);
}

}  // namespace rmt::cli
