#include "params.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "levydec/errors.hpp"

namespace levydec::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
    fail(ErrorCode::InvalidArgument, what + ": '" + text + "' is not a finite number");
  }
  return v;
}

KeyValues parse_kv_list(const std::string& text, const std::string& what) {
  KeyValues kv;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      fail(ErrorCode::InvalidArgument, what + ": expected key=value, got '" + item + "'");
    }
    const std::string key = trim(item.substr(0, eq));
    if (!kv.emplace(key, trim(item.substr(eq + 1))).second) {
      fail(ErrorCode::InvalidArgument, what + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

void expect_keys(const KeyValues& kv, const std::vector<std::string>& allowed, const std::string& what) {
  for (const auto& [key, value] : kv) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) fail(ErrorCode::InvalidArgument, what + ": unknown key '" + key + "'");
  }
}

double kv_number(const KeyValues& kv, const std::string& key, const std::string& what,
                 std::optional<double> fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (fallback) return *fallback;
    fail(ErrorCode::InvalidArgument, what + ": missing key '" + key + "'");
  }
  return parse_number(it->second, what + " " + key);
}

std::string kv_string(const KeyValues& kv, const std::string& key, const std::string& what) {
  const auto it = kv.find(key);
  if (it == kv.end() || it->second.empty()) {
    fail(ErrorCode::InvalidArgument, what + ": missing key '" + key + "'");
  }
  return it->second;
}

SeparationGrid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) fail(ErrorCode::InvalidArgument, "--grid: expected lo:hi:n, got '" + text + "'");
  const double lo = parse_number(parts[0], "--grid lo");
  const double hi = parse_number(parts[1], "--grid hi");
  const double n = parse_number(parts[2], "--grid n");
  if (n < 1 || n != std::floor(n)) fail(ErrorCode::InvalidArgument, "--grid: n must be a positive integer");
  if (n > 1 && !(hi > lo)) fail(ErrorCode::InvalidArgument, "--grid: need hi > lo");
  return SeparationGrid::uniform(lo, hi, static_cast<std::size_t>(n));
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item, what));
  return out;
}

}  // namespace levydec::cli
