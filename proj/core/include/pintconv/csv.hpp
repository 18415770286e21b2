#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pintconv/bounds.hpp"

namespace pintconv {

inline constexpr const char* kVersion = "1.0.0";

/// Resolved configuration echoed at the top of every emitted CSV.
struct Provenance {
  std::vector<std::pair<std::string, std::string>> config;
  void write(std::ostream& os) const;  ///< "# config: k=v ..." and "# version: ..."
};

/// Formats a bound value: "unbounded" for kUnbounded, otherwise full precision.
std::string format_phi(double phi);

/// `w,phi` rows followed by a `# key=value` footer (max_phi, argmax_w, threshold).
void write_curve_csv(std::ostream& os, const CurveSummary& curve);

}  // namespace pintconv
