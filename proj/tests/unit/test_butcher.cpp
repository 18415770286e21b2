#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pintconv/butcher.hpp"
#include "pintconv/registry.hpp"

using namespace pintconv;

namespace {

std::vector<ButcherTableau> all_schemes() {
  std::vector<ButcherTableau> out;
  for (const auto& n : SchemeRegistry::builtin().names()) out.push_back(scheme(n));
  out.push_back(scheme("trbdf2:0.5"));
  return out;
}

}  // namespace

TEST_CASE("registry holds the catalog") {
  for (const char* n : {"fwe", "bwe", "midpoint", "trapezoid", "sdirk22", "sdirk23", "sdirk33",
                        "sdirk34", "esdirk32", "esdirk33", "gauss4", "trbdf2", "erk2", "erk3", "erk4"})
    CHECK_MESSAGE(SchemeRegistry::builtin().contains(n), n);
  CHECK_THROWS_AS(scheme("rk45"), ConfigError);
  CHECK(scheme("trbdf2:0.5").stages() == 3);
}

TEST_CASE("stability_eval examples") {
  CHECK(stability_eval(scheme("bwe"), 1.0).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(stability_eval(scheme("trapezoid"), 2.0)) < 1e-15);
  CHECK(std::abs(stability_eval(scheme("bwe"), 1e12)) < 1e-11);
  CHECK(stability_eval(scheme("erk2"), 0.5).real() == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("lambda(0) is exactly one") {
  for (const auto& t : all_schemes()) CHECK(stability_eval(t, 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("explicit schemes reproduce the truncated exponential") {
  for (const char* n : {"fwe", "erk2", "erk3", "erk4"}) {
    const auto t = scheme(n);
    for (double w : {0.01, 0.1, 0.5, 0.9, 1.3}) {
      double term = 1.0, sum = 1.0;
      for (int l = 1; l <= t.stages(); ++l) {
        term *= -w / l;
        sum += term;
      }
      const double got = stability_eval(t, w).real();
      CHECK_MESSAGE(std::abs(got - sum) <= 1e-14 * std::abs(sum), n << " w=" << w);
    }
  }
}

TEST_CASE("determinant form agrees on random complex points") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> radius(0.0, 10.0), angle(-std::numbers::pi, std::numbers::pi);
  for (const auto& t : all_schemes()) {
    int tested = 0;
    while (tested < 100) {
      const cplx w = std::polar(radius(rng), angle(rng));
      if (oracle::shifted_determinant_magnitude(t, w) < 1e-3) continue;  // too close to a pole
      const cplx a = stability_eval(t, w);
      const cplx b = oracle::determinant_form(t, w);
      CHECK_MESSAGE(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)), t.name() << " w=" << w);
      ++tested;
    }
  }
}

TEST_CASE("poles raise PoleError") {
  CHECK_THROWS_AS(stability_eval(scheme("bwe"), -1.0), PoleError);
  CHECK_THROWS_AS(stability_eval(scheme("trapezoid"), -2.0), PoleError);
}

TEST_CASE("measured order matches the declared order") {
  for (const auto& t : all_schemes()) CHECK_MESSAGE(verify_order(t) == t.order(), t.name());
  CHECK(verify_order(scheme("bwe")) == 1);
  CHECK(verify_order(scheme("sdirk34")) == 4);
  CHECK(verify_order(scheme("gauss4")) == 4);
}

TEST_CASE("order mismatch is reported") {
  const ButcherTableau wrong("bwe-claims-3", {1.0}, {1.0}, {1.0}, 3, StabilityClass::l_stable);
  CHECK_THROWS_AS(verify_order(wrong), OrderMismatch);
  CHECK(measure_order(wrong) == 1);
}

TEST_CASE("classification matches the declared class") {
  for (const auto& t : all_schemes())
    CHECK_MESSAGE(classify_stability(t) == t.stability_class(), t.name());
  CHECK(classify_stability(scheme("sdirk22")) == StabilityClass::l_stable);
  CHECK(classify_stability(scheme("trapezoid")) == StabilityClass::a_stable);
  CHECK(classify_stability(scheme("fwe")) == StabilityClass::conditionally_stable);
  CHECK(classify_stability(scheme("trbdf2")) == StabilityClass::l_stable);
  CHECK(classify_stability(scheme("trbdf2:0.5")) == StabilityClass::a_stable);
}

TEST_CASE("structural flags") {
  for (const char* n : {"bwe", "trapezoid", "sdirk22", "sdirk33", "esdirk32", "esdirk33", "trbdf2"})
    CHECK_MESSAGE(scheme(n).stiffly_accurate(), n);
  for (const char* n : {"midpoint", "sdirk23", "sdirk34", "gauss4", "erk4"})
    CHECK_MESSAGE(!scheme(n).stiffly_accurate(), n);
  for (const char* n : {"fwe", "erk2", "erk3", "erk4"}) CHECK(scheme(n).is_explicit());
  for (const char* n : {"bwe", "trapezoid", "esdirk33", "gauss4"}) CHECK(!scheme(n).is_explicit());
  CHECK(!scheme("gauss4").is_diagonally_implicit());
  CHECK(scheme("esdirk33").is_diagonally_implicit());
}

TEST_CASE("row sums are enforced") {
  CHECK_THROWS_AS(ButcherTableau("bad", {1.0}, {1.0}, {0.5}, 1, StabilityClass::l_stable),
                  std::invalid_argument);
}

TEST_CASE("midpoint and trapezoid share a stability function") {
  for (double w : {1e-3, 0.3, 2.0, 7.5, 1e4}) {
    CHECK(std::abs(stability_eval(scheme("midpoint"), w) - stability_eval(scheme("trapezoid"), w)) < 1e-14);
    const cplx iw(0.0, w);
    CHECK(std::abs(stability_eval(scheme("midpoint"), iw) - stability_eval(scheme("trapezoid"), iw)) < 1e-14);
  }
}

TEST_CASE("text serialization round-trips") {
  for (const auto& t : all_schemes()) {
    const ButcherTableau back = parse_tableau(to_text(t));
    CHECK(back.name() == t.name());
    CHECK(back.order() == t.order());
    CHECK(back.stability_class() == t.stability_class());
    CHECK(back.a_row_major() == t.a_row_major());
    CHECK(back.b() == t.b());
    CHECK(back.c() == t.c());
  }
  CHECK_THROWS_AS(parse_tableau("name = x\ns = 1\norder = 1\nA = 1\nb = 1\ncolor = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_tableau("name = x\ns = 2\norder = 1\nA = 1\nb = 1\n"), ConfigError);
}
