#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "pintconv/errors.hpp"

namespace pintconv {

using cplx = std::complex<double>;

enum class StabilityClass { a_stable, l_stable, conditionally_stable };

std::string_view to_string(StabilityClass c);
/// Accepts "A_stable", "L_stable", "conditionally_stable".
StabilityClass parse_stability_class(std::string_view text);

/// An s-stage Runge-Kutta scheme (A, b, c).
///
/// The constructor checks shapes and row-sum consistency c_i = sum_j A_ij.
/// Stiff accuracy and explicitness are derived from A and b, never declared.
class ButcherTableau {
 public:
  ButcherTableau(std::string name, std::vector<double> a_row_major,
                 std::vector<double> b, std::vector<double> c, int order,
                 StabilityClass declared_class);

  const std::string& name() const noexcept { return name_; }
  int stages() const noexcept { return s_; }
  double a(int i, int j) const { return a_[static_cast<std::size_t>(i * s_ + j)]; }
  const std::vector<double>& a_row_major() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  const std::vector<double>& c() const noexcept { return c_; }
  int order() const noexcept { return order_; }
  StabilityClass stability_class() const noexcept { return class_; }
  bool stiffly_accurate() const noexcept { return stiffly_accurate_; }
  bool is_explicit() const noexcept { return explicit_; }
  /// A lower triangular (DIRK family, explicit schemes included).
  bool is_diagonally_implicit() const noexcept { return lower_triangular_; }

  ButcherTableau renamed(std::string name) const;

 private:
  std::string name_;
  int s_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
  int order_;
  StabilityClass class_;
  bool stiffly_accurate_ = false;
  bool explicit_ = false;
  bool lower_triangular_ = false;
};

/// lambda(w) = 1 - w b^T (I + wA)^{-1} 1, i.e. the stability function at z = -w.
/// Throws PoleError when a pivot falls below 1e-300.
cplx stability_eval(const ButcherTableau& tab, cplx w);

/// Same evaluation in extended precision on the real axis (used for order checks).
double stability_defect_extended(const ButcherTableau& tab, double w);

/// Largest p with log-log slope of |lambda(w) - exp(-w)| over [1e-3, 1e-2]
/// at least p + 1 - 0.1. Does not compare with the declared order.
int measure_order(const ButcherTableau& tab);

/// measure_order(), throwing OrderMismatch if it differs from tab.order().
int verify_order(const ButcherTableau& tab);

/// Boundary-sampling classification (imaginary axis out to |y| = 1e6 plus
/// large-|w| samples, and a pole check in the right half plane).
StabilityClass classify_stability(const ButcherTableau& tab);

/// Plain-text key-value block: name, s, order, class, A (row-major), b, c.
std::string to_text(const ButcherTableau& tab);
ButcherTableau parse_tableau(std::string_view text);

}  // namespace pintconv
