#pragma once
// Independent reference computations used by the tests. Nothing here calls
// into the library's evaluation paths.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "pintconv/butcher.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// det(I + wA - w 1 b^T) / det(I + wA): the stability function at z = -w.
inline cplx determinant_form(const pintconv::ButcherTableau& tab, cplx w) {
  const int s = tab.stages();
  Eigen::MatrixXcd den = Eigen::MatrixXcd::Identity(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) den(i, j) += w * tab.a(i, j);
  Eigen::MatrixXcd num = den;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) num(i, j) -= w * tab.b()[static_cast<std::size_t>(j)];
  return num.determinant() / den.determinant();
}

inline double shifted_determinant_magnitude(const pintconv::ButcherTableau& tab, cplx w) {
  const int s = tab.stages();
  Eigen::MatrixXcd den = Eigen::MatrixXcd::Identity(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) den(i, j) += w * tab.a(i, j);
  return std::abs(den.determinant());
}

/// Two-level F-relaxation C-point error propagator for one mode:
/// E = (I - mu S)^{-1} (lambda^k - mu) S with S the Nc x Nc down-shift.
inline Eigen::MatrixXcd two_level_error_matrix(cplx lam_k, cplx mu, int nc) {
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(nc, nc);
  for (int i = 1; i < nc; ++i) shift(i, i - 1) = 1.0;
  const Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(nc, nc) - mu * shift;
  return lhs.triangularView<Eigen::Lower>().solve((lam_k - mu) * shift);
}

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace oracle
