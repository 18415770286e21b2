#include "pintconv/registry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pintconv/text.hpp"

namespace pintconv {

namespace {

using SC = StabilityClass;

ButcherTableau one_stage(std::string name, double a, double b, int order, SC cls) {
  return ButcherTableau(std::move(name), {a}, {b}, {a}, order, cls);
}

ButcherTableau sdirk22() {
  const double g = (2.0 - std::numbers::sqrt2) / 2.0;
  return ButcherTableau("sdirk22", {g, 0.0, 1.0 - g, g}, {1.0 - g, g}, {g, 1.0}, 2, SC::l_stable);
}

ButcherTableau sdirk23() {
  const double g = (3.0 + std::numbers::sqrt3) / 6.0;
  return ButcherTableau("sdirk23", {g, 0.0, 1.0 - 2.0 * g, g}, {0.5, 0.5}, {g, 1.0 - g}, 3,
                        SC::a_stable);
}

ButcherTableau sdirk33() {
  // Constants kept as published decimals.
  const double g = 0.435866521508458999416019;
  const double b = 1.20849664917601007033648;
  const double c = 0.717933260754229499708010;
  return ButcherTableau("sdirk33",
                        {g, 0.0, 0.0,
                         c - g, g, 0.0,
                         b, 1.0 - b - g, g},
                        {b, 1.0 - b - g, g}, {g, c, 1.0}, 3, SC::l_stable);
}

ButcherTableau sdirk34() {
  const double g = (3.0 + 2.0 * std::numbers::sqrt3 * std::cos(std::numbers::pi / 18.0)) / 6.0;
  const double b = 1.0 / (6.0 * (1.0 - 2.0 * g) * (1.0 - 2.0 * g));
  return ButcherTableau("sdirk34",
                        {g, 0.0, 0.0,
                         0.5 - g, g, 0.0,
                         2.0 * g, 1.0 - 4.0 * g, g},
                        {b, 1.0 - 2.0 * b, b}, {g, 0.5, 1.0 - g}, 4, SC::a_stable);
}

ButcherTableau trapezoid() {
  return ButcherTableau("trapezoid", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0}, 2,
                        SC::a_stable);
}

ButcherTableau esdirk32() {
  const double g = (2.0 - std::numbers::sqrt2) / 2.0;
  const double b = (1.0 - 2.0 * g) / (4.0 * g);
  return ButcherTableau("esdirk32",
                        {0.0, 0.0, 0.0,
                         g, g, 0.0,
                         1.0 - b - g, b, g},
                        {1.0 - b - g, b, g}, {0.0, 2.0 * g, 1.0}, 2, SC::l_stable);
}

ButcherTableau esdirk33() {
  const double g = (3.0 + std::numbers::sqrt3) / 6.0;
  const double b2 = 1.0 / (12.0 * g * (1.0 - 2.0 * g));
  const double b3 = (1.0 - 3.0 * g) / (3.0 * (1.0 - 2.0 * g));
  const double a31 = (6.0 * g - 1.0) / (4.0 * g) - g;
  const double a32 = (1.0 - 2.0 * g) / (4.0 * g);
  return ButcherTableau("esdirk33",
                        {0.0, 0.0, 0.0,
                         g, g, 0.0,
                         a31, a32, g},
                        {1.0 - b2 - b3, b2, b3}, {0.0, 2.0 * g, a31 + a32 + g}, 3,
                        SC::a_stable);
}

ButcherTableau gauss4() {
  const double r3 = std::numbers::sqrt3;
  return ButcherTableau("gauss4",
                        {0.25, (3.0 - 2.0 * r3) / 12.0,
                         (3.0 + 2.0 * r3) / 12.0, 0.25},
                        {0.5, 0.5}, {(3.0 - r3) / 6.0, (3.0 + r3) / 6.0}, 4, SC::a_stable);
}

ButcherTableau erk2() {
  // Heun
  return ButcherTableau("erk2", {0.0, 0.0, 1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}, 2,
                        SC::conditionally_stable);
}

ButcherTableau erk3() {
  // Kutta's third-order method
  return ButcherTableau("erk3",
                        {0.0, 0.0, 0.0,
                         0.5, 0.0, 0.0,
                         -1.0, 2.0, 0.0},
                        {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, {0.0, 0.5, 1.0}, 3,
                        SC::conditionally_stable);
}

ButcherTableau erk4() {
  return ButcherTableau("erk4",
                        {0.0, 0.0, 0.0, 0.0,
                         0.5, 0.0, 0.0, 0.0,
                         0.0, 0.5, 0.0, 0.0,
                         0.0, 0.0, 1.0, 0.0},
                        {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}, {0.0, 0.5, 0.5, 1.0}, 4,
                        SC::conditionally_stable);
}

}  // namespace

ButcherTableau make_trbdf2(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ConfigError("trbdf2: gamma must lie in (0, 1), got " + format_real(gamma));
  const double g = gamma;
  const double a31 = (3.0 * g - g * g - 1.0) / (2.0 * g);
  const double a32 = (1.0 - g) / (2.0 * g);
  const double a33 = g / 2.0;
  const bool l_stable = std::abs(g - (2.0 - std::numbers::sqrt2)) < 1e-12;
  return ButcherTableau(l_stable ? "trbdf2" : "trbdf2:" + format_real(g),
                        {0.0, 0.0, 0.0,
                         g / 2.0, g / 2.0, 0.0,
                         a31, a32, a33},
                        {a31, a32, a33}, {0.0, g, a31 + a32 + a33}, 2,
                        l_stable ? SC::l_stable : SC::a_stable);
}

SchemeRegistry::SchemeRegistry() {
  auto add = [this](ButcherTableau t) { entries_.emplace(t.name(), std::move(t)); };
  add(ButcherTableau("fwe", {0.0}, {1.0}, {0.0}, 1, SC::conditionally_stable));
  add(one_stage("bwe", 1.0, 1.0, 1, SC::l_stable));
  add(one_stage("midpoint", 0.5, 1.0, 2, SC::a_stable));
  add(trapezoid());
  add(sdirk22());
  add(sdirk23());
  add(sdirk33());
  add(sdirk34());
  add(esdirk32());
  add(esdirk33());
  add(gauss4());
  add(make_trbdf2(2.0 - std::numbers::sqrt2));
  add(erk2());
  add(erk3());
  add(erk4());
}

const SchemeRegistry& SchemeRegistry::builtin() {
  static const SchemeRegistry registry;
  return registry;
}

bool SchemeRegistry::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

ButcherTableau SchemeRegistry::get(std::string_view name) const {
  if (auto it = entries_.find(name); it != entries_.end()) return it->second;
  if (name.starts_with("trbdf2:")) return make_trbdf2(parse_real(name.substr(7)));
  if (name.starts_with("file:")) {
    const std::string path(name.substr(5));
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tableau file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tableau(ss.str());
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::vector<std::string> SchemeRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, tab] : entries_) out.push_back(name);
  return out;
}

}  // namespace pintconv
