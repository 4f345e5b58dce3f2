#ifndef ECOCECS_TEXT_UTIL_HPP
#define ECOCECS_TEXT_UTIL_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace ecocecs::detail {

/// Shortest text that parses back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

inline std::vector<std::string> split_csv(const std::string& line, char sep = ',') {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == sep) {
    cells.emplace_back();
  }
  return cells;
}

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline bool parse_real(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') {
    ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return first != last && ec == std::errc{} && ptr == last && std::isfinite(out);
}

} // namespace ecocecs::detail

#endif // ECOCECS_TEXT_UTIL_HPP
