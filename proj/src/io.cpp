#include "sdepth/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sdepth::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(trim(field));
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw FormatError("not a number: '" + s + "' (" + where + ")");
  return value;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return in;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
  }
  return {{"dim", m.rows()}, {"entries", entries}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const nlohmann::json* entries = &j;
  if (j.is_object()) {
    if (!j.contains("entries")) throw FormatError("matrix JSON needs an 'entries' field");
    entries = &j.at("entries");
  }
  if (!entries->is_array() || entries->empty()) throw FormatError("matrix entries must be a non-empty array");
  if (entries->front().is_array()) {
    const auto k = static_cast<Eigen::Index>(entries->size());
    Matrix m(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto& row = (*entries)[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k) throw FormatError("matrix rows must have length k");
      for (Eigen::Index c = 0; c < k; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
  }
  const auto count = static_cast<Eigen::Index>(entries->size());
  Eigen::Index k = 0;
  if (j.is_object() && j.contains("dim")) {
    k = j.at("dim").get<Eigen::Index>();
  } else {
    while (k * k < count) ++k;
  }
  if (k <= 0 || k * k != count) throw FormatError("matrix entries do not match dim*dim");
  Matrix m(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) m(r, c) = (*entries)[static_cast<std::size_t>(r * k + c)].get<double>();
  }
  return m;
}

Matrix read_matrix(const std::string& path) {
  auto in = open(path);
  if (ends_with(path, ".json")) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ": " + e.what());
    }
    return matrix_from_json(j);
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_csv_line(line)) row.push_back(parse_double(f, path + ":" + std::to_string(lineno)));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path + ": empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) throw FormatError(path + ": ragged matrix rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

SpdMatrix read_spd(const std::string& path) { return SpdMatrix(read_matrix(path)); }

void write_matrix_json(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << matrix_to_json(m).dump() << '\n';
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

Table read_table_csv(const std::string& path) {
  auto in = open(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": missing header row");
  auto header = split_csv_line(line);
  Table t;
  std::size_t first_numeric = 0;
  if (!header.empty() && (header.front() == "timestamp" || header.front() == "window")) {
    t.tag_column = header.front();
    first_numeric = 1;
  }
  t.columns.assign(header.begin() + static_cast<std::ptrdiff_t>(first_numeric), header.end());
  if (t.columns.empty()) throw FormatError(path + ": no numeric columns");
  std::vector<double> flat;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " fields");
    }
    if (first_numeric) t.tags.push_back(fields.front());
    for (std::size_t c = first_numeric; c < fields.size(); ++c) {
      flat.push_back(parse_double(fields[c], path + ":" + std::to_string(lineno)));
    }
  }
  const auto k = static_cast<Eigen::Index>(t.columns.size());
  const auto n = static_cast<Eigen::Index>(flat.size()) / k;
  t.values.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) t.values(i, j) = flat[static_cast<std::size_t>(i * k + j)];
  }
  return t;
}

}  // namespace sdepth::io
