#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pintconv {

/// Shortest round-trip formatting ("%.17g"); infinities print as "inf".
std::string format_real(double x);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

int parse_int(std::string_view s);
/// Accepts decimal reals, "inf", and simple fractions such as "1/512".
double parse_real(std::string_view s);
std::vector<double> parse_real_list(std::string_view s, char sep);
std::vector<int> parse_int_list(std::string_view s);

/// Parses `key = value` lines, ignoring blank lines and `#` comments.
/// Keys outside `allowed` (when non-empty) raise ConfigError, as do duplicates.
std::map<std::string, std::string> parse_key_values(
    std::string_view text, std::initializer_list<std::string_view> allowed = {});
std::map<std::string, std::string> parse_key_values(
    std::string_view text, const std::vector<std::string>& allowed);

}  // namespace pintconv
