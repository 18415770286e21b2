#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pintconv/butcher.hpp"

namespace pintconv {

/// TR-BDF2 written as a three-stage ESDIRK with trapezoid fraction gamma.
ButcherTableau make_trbdf2(double gamma);

/// Immutable name -> tableau map holding the built-in catalog.
///
/// Canonical names: fwe, bwe, midpoint, trapezoid, sdirk22, sdirk23, sdirk33,
/// sdirk34, esdirk32, esdirk33, gauss4, trbdf2 (gamma = 2 - sqrt 2), erk2,
/// erk3, erk4. `trbdf2:<gamma>` builds the parametrized family on demand and
/// `file:<path>` loads a key-value tableau file.
class SchemeRegistry {
 public:
  static const SchemeRegistry& builtin();

  bool contains(std::string_view name) const;
  /// Throws ConfigError for unknown names.
  ButcherTableau get(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  SchemeRegistry();
  std::map<std::string, ButcherTableau, std::less<>> entries_;
};

inline ButcherTableau scheme(std::string_view name) { return SchemeRegistry::builtin().get(name); }

}  // namespace pintconv
