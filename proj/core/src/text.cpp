#include "pintconv/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pintconv/errors.hpp"

namespace pintconv {

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (sep == ' ') {
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
      if (j > i) out.emplace_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    const auto piece = trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("expected an integer, got '" + std::string(s) + "'");
  return v;
}

double parse_real(std::string_view s) {
  s = trim(s);
  if (s == "inf" || s == "INF" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (const auto slash = s.find('/'); slash != std::string_view::npos)
    return parse_real(s.substr(0, slash)) / parse_real(s.substr(slash + 1));
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size())
    throw ConfigError("expected a real number, got '" + tmp + "'");
  return v;
}

std::vector<double> parse_real_list(std::string_view s, char sep) {
  std::vector<double> out;
  for (const auto& piece : split(s, sep)) out.push_back(parse_real(piece));
  return out;
}

std::vector<int> parse_int_list(std::string_view s) {
  // "2,4,8" or ranges "2..16" (step 1) mixed freely
  std::vector<int> out;
  for (const auto& piece : split(s, ',')) {
    if (const auto dots = piece.find(".."); dots != std::string::npos) {
      const int lo = parse_int(std::string_view(piece).substr(0, dots));
      const int hi = parse_int(std::string_view(piece).substr(dots + 2));
      if (hi < lo) throw ConfigError("empty range '" + piece + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_int(piece));
    }
  }
  return out;
}

namespace {

template <class Allowed>
std::map<std::string, std::string> parse_kv_impl(std::string_view text, const Allowed& allowed) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::begin(allowed) != std::end(allowed) &&
        std::find(std::begin(allowed), std::end(allowed), key) == std::end(allowed))
      throw ConfigError("unknown key '" + key + "'");
    if (out.contains(key)) throw ConfigError("duplicate key '" + key + "'");
    out.emplace(std::move(key), value);
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(
    std::string_view text, std::initializer_list<std::string_view> allowed) {
  return parse_kv_impl(text, allowed);
}

std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    const std::vector<std::string>& allowed) {
  return parse_kv_impl(text, allowed);
}

}  // namespace pintconv
