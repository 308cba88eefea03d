#include "levydec/table_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levydec/errors.hpp"

namespace levydec {

namespace {

double parse_number(const std::string& token, const std::string& where) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    fail(ErrorCode::ParseError, where + ": not a finite number: '" + token + "'");
  }
  return value;
}

}  // namespace

Table parse_table(std::istream& in, const std::string& source) {
  Table table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    const std::string where = source + ":" + std::to_string(lineno);
    if (b.empty() || (fields >> extra)) {
      fail(ErrorCode::ParseError, where + ": expected exactly two columns");
    }
    const double x = parse_number(a, where);
    const double y = parse_number(b, where);
    if (!table.x.empty() && x <= table.x.back()) {
      fail(ErrorCode::ParseError, where + ": first column must be strictly increasing");
    }
    table.x.push_back(x);
    table.y.push_back(y);
  }
  if (table.x.empty()) fail(ErrorCode::ParseError, source + ": no data rows");
  return table;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path.string());
  return parse_table(in, path.string());
}

}  // namespace levydec
