#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "pintconv/butcher.hpp"

namespace pintconv {

/// Polynomial stored in the variable (-w): coefficient(l) multiplies (-w)^l,
/// so a truncated exponential has coefficient(l) = 1/l!.
class StabilityPolynomial {
 public:
  StabilityPolynomial() = default;
  explicit StabilityPolynomial(std::vector<double> coefficients_in_minus_w);
  static StabilityPolynomial from_monomials(const std::vector<double>& coefficients_in_w);

  int degree() const noexcept;
  double coefficient(int l) const;
  const std::vector<double>& coefficients() const noexcept { return c_; }
  /// Coefficients of w^l: (-1)^l coefficient(l).
  std::vector<double> monomial_coefficients() const;

  cplx evaluate(cplx w) const;
  /// p(w) -> p(k w)
  StabilityPolynomial scaled(double k) const;
  StabilityPolynomial operator*(const StabilityPolynomial& other) const;
  StabilityPolynomial operator-(const StabilityPolynomial& other) const;

 private:
  std::vector<double> c_{1.0};
};

/// lambda(w) of an explicit tableau, exactly: coefficient(l) = b^T A^{l-1} 1.
/// Throws std::invalid_argument for implicit tableaux.
StabilityPolynomial stability_polynomial(const ButcherTableau& tab);

/// lambda(w)^k by repeated convolution (degree s k for order-s schemes).
StabilityPolynomial phi_k_polynomial(const ButcherTableau& tab, int k);

/// True when mu(w) = lambda(k w) matches the first s+1 coefficients of lambda^k.
/// Throws NotTruncatedExponential when lambda is not the degree-s Taylor polynomial of exp(-w).
bool check_taylor_optimality(const ButcherTableau& tab, int k);

/// p(w) = lambda(k w) - lambda(w)^k.
StabilityPolynomial singularity_polynomial(const ButcherTableau& tab, int k);

struct PolynomialRoot {
  cplx value;
  int multiplicity = 1;
  bool in_stable_region = false;     ///< real, positive, |lambda| < 1 and |mu| < 1
  bool on_imaginary_stable = false;  ///< purely imaginary with |lambda| < 1 and |mu| < 1
};

/// Roots of singularity_polynomial with |w| <= w_max. The root at zero is
/// reported once with its multiplicity; the rest come from companion-matrix
/// eigenvalues polished by a Newton step.
std::vector<PolynomialRoot> singularity_roots(const ButcherTableau& tab, int k, double w_max);

/// Companion-matrix roots of a polynomial given by monomial coefficients.
std::vector<cplx> polynomial_roots(const std::vector<double>& coefficients_in_w);

void write_roots_csv(std::ostream& os, const std::vector<PolynomialRoot>& roots);

}  // namespace pintconv
