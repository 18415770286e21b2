#include <doctest.h>

#include <cmath>

#include "pintconv/explicit_analysis.hpp"
#include "pintconv/registry.hpp"

using namespace pintconv;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("stability polynomial of the ERK family is the truncated exponential") {
  for (const char* n : {"fwe", "erk2", "erk3", "erk4"}) {
    const auto t = scheme(n);
    const auto p = stability_polynomial(t);
    CHECK(p.degree() == t.stages());
    for (int l = 0; l <= t.stages(); ++l) CHECK(p.coefficient(l) == doctest::Approx(1.0 / factorial(l)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(stability_polynomial(scheme("bwe")), std::invalid_argument);
}

TEST_CASE("phi_k_polynomial examples") {
  CHECK(phi_k_polynomial(scheme("fwe"), 2).monomial_coefficients() == std::vector<double>{1.0, -2.0, 1.0});

  const auto erk2 = phi_k_polynomial(scheme("erk2"), 2).monomial_coefficients();
  REQUIRE(erk2.size() == 5);
  CHECK(erk2[0] == 1.0);
  CHECK(erk2[1] == -2.0);
  CHECK(erk2[2] == 2.0);

  // symbolic oracle: the low-order part of lambda^k is the series of exp(-k w)
  const auto erk3 = phi_k_polynomial(scheme("erk3"), 3);
  CHECK(erk3.degree() == 9);
  const auto m = erk3.monomial_coefficients();
  const double expect[] = {1.0, -3.0, 4.5, -4.5};
  for (int l = 0; l < 4; ++l) {
    CHECK(m[static_cast<std::size_t>(l)] == doctest::Approx(expect[l]).epsilon(1e-14));
    CHECK(m[static_cast<std::size_t>(l)] == doctest::Approx(std::pow(-3.0, l) / factorial(l)).epsilon(1e-14));
  }
}

TEST_CASE("phi_k_polynomial degree and evaluation") {
  for (const char* n : {"fwe", "erk2", "erk3", "erk4"})
    for (int k = 2; k <= 16; ++k) {
      const auto t = scheme(n);
      const auto p = phi_k_polynomial(t, k);
      CHECK(p.degree() == t.stages() * k);
      for (double w : {0.05, 0.4}) {
        const cplx direct = std::pow(stability_eval(t, w), k);
        // rounding scale of the monomial sum; lambda^k itself can be tiny from cancellation
        double scale = 0.0;
        const auto m = p.monomial_coefficients();
        for (std::size_t l = 0; l < m.size(); ++l) scale += std::abs(m[l]) * std::pow(w, l);
        CHECK(std::abs(p.evaluate(w) - direct) <= 1e-13 * scale);
      }
    }
}

TEST_CASE("Taylor optimality for explicit schemes") {
  for (const char* n : {"fwe", "erk2", "erk3", "erk4"})
    for (int k = 2; k <= 16; ++k) CHECK_MESSAGE(check_taylor_optimality(scheme(n), k), n << " k=" << k);
  CHECK(check_taylor_optimality(scheme("erk4"), 8));
}

TEST_CASE("Taylor optimality refuses a non-truncated exponential") {
  // three stages but only second order: b^T A^2 1 = 0 instead of 1/6
  const ButcherTableau erk32("erk32", {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0},
                             {0.5, 0.25, 0.25}, {0.0, 1.0, 1.0}, 2,
                             StabilityClass::conditionally_stable);
  CHECK_THROWS_AS(check_taylor_optimality(erk32, 2), NotTruncatedExponential);
}

TEST_CASE("singularity roots examples") {
  const auto fwe = singularity_roots(scheme("fwe"), 2, 10.0);
  REQUIRE(fwe.size() == 1);
  CHECK(fwe[0].value == cplx(0.0, 0.0));
  CHECK(fwe[0].multiplicity == 2);
  CHECK(!fwe[0].in_stable_region);

  // dense sign scan of p on (0, 1): no sign change, no real root
  const auto p = singularity_polynomial(scheme("erk2"), 2);
  int sign_changes = 0;
  double prev = p.evaluate(1e-5).real();
  for (int i = 2; i <= 100000; ++i) {
    const double v = p.evaluate(i * 1e-5).real();
    if ((v > 0) != (prev > 0)) ++sign_changes;
    prev = v;
  }
  CHECK(sign_changes == 0);
  for (const auto& r : singularity_roots(scheme("erk2"), 2, 10.0)) {
    const bool real_in_window = std::abs(r.value.imag()) < 1e-9 && r.value.real() > 0 && r.value.real() < 1;
    CHECK(!real_in_window);
  }

  for (const auto& r : singularity_roots(scheme("erk4"), 4, 10.0)) CHECK(!r.in_stable_region);
}

TEST_CASE("no stable-region roots for s <= 4 and k in 2..16") {
  for (const char* n : {"fwe", "erk2", "erk3", "erk4"})
    for (int k = 2; k <= 16; ++k) {
      const auto t = scheme(n);
      const auto roots = singularity_roots(t, k, 10.0);
      REQUIRE(!roots.empty());
      CHECK(roots.front().value == cplx(0.0, 0.0));
      CHECK(roots.front().multiplicity == t.stages() + 1);
      const auto poly = singularity_polynomial(t, k);
      const auto m = poly.monomial_coefficients();
      for (const auto& r : roots) {
        CHECK_MESSAGE(!r.in_stable_region, n << " k=" << k << " root " << r.value);
        // backward-error form of |p(root)| being small
        double scale = 0.0;
        for (std::size_t l = 0; l < m.size(); ++l) scale += std::abs(m[l]) * std::pow(std::abs(r.value), l);
        CHECK(std::abs(poly.evaluate(r.value)) <= 1e-9 * std::max(scale, 1e-300));
      }
    }
}

TEST_CASE("singularity_roots preconditions") {
  CHECK_THROWS_AS(singularity_roots(scheme("sdirk22"), 2, 10.0), ConfigError);
}

TEST_CASE("companion roots of a known polynomial") {
  // (w - 1)(w - 2)(w + 3) = w^3 - 7w + 6
  auto r = polynomial_roots({6.0, -7.0, 0.0, 1.0});
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  CHECK(r[0].real() == doctest::Approx(-3.0));
  CHECK(r[1].real() == doctest::Approx(1.0));
  CHECK(r[2].real() == doctest::Approx(2.0));
}
