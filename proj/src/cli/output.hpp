#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace levydec::cli {

struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Ordered key/value pairs written ahead of the data.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits; non-finite values print as inf, -inf, nan.
std::string format_double(double v);

/// '#'-prefixed metadata lines, a header row, then comma-separated rows.
void write_csv(std::ostream& out, const Metadata& meta, const DataTable& table);

/// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}; non-finite
/// values are written as strings.
void write_json(std::ostream& out, const Metadata& meta, const DataTable& table);

}  // namespace levydec::cli
