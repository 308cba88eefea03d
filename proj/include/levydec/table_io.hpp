#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace levydec {

/// Two-column tabulation (x, value), x strictly increasing.
struct Table {
  std::vector<double> x;
  std::vector<double> y;
};

/// Parses whitespace-separated "x value" lines.  Blank lines and lines whose
/// first non-blank character is '#' are skipped.  Throws ParseError.
Table parse_table(std::istream& in, const std::string& source = "<stream>");
Table read_table(const std::filesystem::path& path);

}  // namespace levydec
