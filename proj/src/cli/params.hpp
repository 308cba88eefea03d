#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levydec/grid.hpp"

namespace levydec::cli {

/// "a=0,D=1" -> {a: "0", D: "1"}.  Throws InvalidArgument on malformed or
/// duplicate entries.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_kv_list(const std::string& text, const std::string& what);

/// Rejects keys outside `allowed`.
void expect_keys(const KeyValues& kv, const std::vector<std::string>& allowed, const std::string& what);

double kv_number(const KeyValues& kv, const std::string& key, const std::string& what,
                 std::optional<double> fallback = std::nullopt);
std::string kv_string(const KeyValues& kv, const std::string& key, const std::string& what);

double parse_number(const std::string& text, const std::string& what);

/// "lo:hi:n" -> n evenly spaced separations.
SeparationGrid parse_grid(const std::string& text);

/// "0.5,2,10" -> {0.5, 2, 10}.
std::vector<double> parse_number_list(const std::string& text, const std::string& what);

}  // namespace levydec::cli
