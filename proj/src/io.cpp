#include "diracgap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "diracgap/errors.hpp"

namespace diracgap::io {

std::string config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns, const nlohmann::json& config,
                     const std::vector<std::pair<std::string, std::string>>& meta)
    : impl_(new Impl), n_columns_(columns.size()) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) {
    delete impl_;
    throw ValidationError("cannot open '" + path + "' for writing");
  }
  impl_->out << "# config_hash: " << config_hash(config) << '\n';
  for (const auto& [k, v] : meta) impl_->out << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) impl_->out << (i ? "," : "") << columns[i];
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_) throw ValidationError("csv: row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) impl_->out << (i ? "," : "") << cells[i];
  impl_->out << '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(fmt(v));
  row(s);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

bs::PotentialField read_potential_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      if (b == std::string::npos) {
        numeric = false;
        break;
      }
      const std::string t = cell.substr(b, e - b + 1);
      double v = 0.0;
      const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
      if (r.ec != std::errc() || r.ptr != t.data() + t.size()) {
        numeric = false;
        break;
      }
      vals.push_back(v);
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header row
      throw ValidationError("potential csv: non-numeric data row");
    }
    if (width == 0) width = vals.size();
    if (vals.size() != width) throw ValidationError("potential csv: ragged rows");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ValidationError("potential csv: no data rows");
  const int d = static_cast<int>(width) - 1;
  if (d < 1 || d > 3) throw ValidationError("potential csv: expected 2 to 4 columns");
  const int L = static_cast<int>(std::lround(std::pow(static_cast<double>(rows.size()), 1.0 / d)));
  std::size_t expect = 1;
  for (int k = 0; k < d; ++k) expect *= static_cast<std::size_t>(L);
  if (expect != rows.size()) throw ValidationError("potential csv: row count is not L^d");
  double xmin = rows[0][0];
  for (const auto& r : rows)
    for (int k = 0; k < d; ++k) xmin = std::min(xmin, r[k]);
  bs::GridSpec g{d, -xmin, L};
  g.validate();
  bs::PotentialField V{g, std::vector<double>(rows.size(), -1.0)};
  const double h = g.h();
  for (const auto& r : rows) {
    std::size_t flat = 0;
    for (int k = 0; k < d; ++k) {
      const double jd = (r[k] + g.a) / h;
      const long j = std::lround(jd);
      if (std::abs(jd - j) > 1e-6 || j < 0 || j >= L) throw ValidationError("potential csv: node off the grid");
      flat = flat * L + static_cast<std::size_t>(j);
    }
    if (V.values[flat] >= 0.0) throw ValidationError("potential csv: duplicate node");
    V.values[flat] = r[d];
  }
  V.validate();
  return V;
}

void write_potential_csv(const std::string& path, const bs::PotentialField& V, const nlohmann::json& config) {
  std::vector<std::string> cols;
  for (int k = 0; k < V.grid.d; ++k) cols.push_back("x" + std::to_string(k + 1));
  cols.push_back("V");
  CsvWriter w(path, cols, config,
              {{"grid", "d=" + std::to_string(V.grid.d) + " a=" + fmt(V.grid.a) + " L=" + std::to_string(V.grid.L)}});
  for (std::size_t i = 0; i < V.values.size(); ++i) {
    const auto x = V.grid.position(i);
    std::vector<double> row(x.begin(), x.begin() + V.grid.d);
    row.push_back(V.values[i]);
    w.row(row);
  }
}

}  // namespace diracgap::io
