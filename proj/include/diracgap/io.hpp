#pragma once

#include <string>
#include <vector>

#include "diracgap/grid.hpp"
#include "json.hpp"

namespace diracgap::io {

// FNV-1a 64 of the compact JSON dump (keys sorted), as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// Round-trip formatting of a double.
std::string fmt(double v);

class CsvWriter {
 public:
  // Writes `# key: value` metadata lines (always including config_hash) and the column header.
  CsvWriter(const std::string& path, const std::vector<std::string>& columns, const nlohmann::json& config,
            const std::vector<std::pair<std::string, std::string>>& meta = {});
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& cells);

 private:
  struct Impl;
  Impl* impl_;
  std::size_t n_columns_;
};

void write_json(const std::string& path, const nlohmann::json& j);

// Columns x_1..x_d, V; '#' lines and the header row are skipped. The nodes must form the
// full periodic grid -a + j h, j = 0..L-1, in any order.
bs::PotentialField read_potential_csv(const std::string& path);
void write_potential_csv(const std::string& path, const bs::PotentialField& V, const nlohmann::json& config);

}  // namespace diracgap::io
