#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace rmt::cli {

// Round-trippable rendering: 17 significant digits.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> outputs;
  double elapsed = 0.0;
  std::string toolkit_version;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

class MarkdownTable {
 public:
  explicit MarkdownTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& os) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Short scientific rendering for tables, e.g. 1.01e-03.
std::string sci(double v, int digits = 3);
std::string fixed(double v, int decimals);

}  // namespace rmt::cli
