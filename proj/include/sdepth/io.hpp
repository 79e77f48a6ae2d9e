#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdepth/spd.hpp"

namespace sdepth::io {

/// Raised for unreadable or malformed input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"dim": k, "entries": [row-major k*k values]}. Nested row arrays are
/// accepted on input as well.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

Matrix read_matrix(const std::string& path);  ///< .json or row-major .csv
SpdMatrix read_spd(const std::string& path);
void write_matrix_json(const std::string& path, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

/// Numeric table with an optional leading tag column (`timestamp` or
/// `window`). Every other column must be numeric.
struct Table {
  std::vector<std::string> columns;  ///< numeric column names
  std::string tag_column;            ///< empty when absent
  std::vector<std::string> tags;
  Matrix values;
};

Table read_table_csv(const std::string& path);

/// Shortest round-trip decimal representation (locale independent).
std::string format_double(double x);

}  // namespace sdepth::io
