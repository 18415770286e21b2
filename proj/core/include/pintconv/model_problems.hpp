#pragma once

#include <complex>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "pintconv/butcher.hpp"

namespace pintconv {

enum class ProblemKind { diagonal_spd, diagonal_skew, fd_diffusion_1d, fd_advection_1d_periodic };

std::string_view to_string(ProblemKind k);

/// Tridiagonal matrix, optionally with periodic corner entries
/// (A(0, M-1) = lower, A(M-1, 0) = upper for a circulant band).
struct TridiagonalMatrix {
  double lower = 0.0;
  double diag = 0.0;
  double upper = 0.0;
  int size = 0;
  bool periodic = false;

  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  /// Solves (I + c A) x = rhs in place; Thomas or Sherman-Morrison for the periodic case.
  /// Throws SolveError on a vanishing pivot.
  void solve_shifted(double c, std::span<cplx> rhs) const;
  std::vector<double> dense() const;  ///< row-major
};

/// A simultaneously diagonalizable spatial operator L (the ODE is u' = -L u).
class ModelProblem {
 public:
  ModelProblem(ProblemKind kind, std::vector<cplx> eigenvalues,
               std::optional<TridiagonalMatrix> matrix = std::nullopt, double h_x = 0.0);

  ProblemKind kind() const noexcept { return kind_; }
  const std::vector<cplx>& eigenvalues() const noexcept { return eig_; }
  const std::optional<TridiagonalMatrix>& matrix() const noexcept { return matrix_; }
  double h_x() const noexcept { return h_x_; }
  std::size_t size() const noexcept { return eig_.size(); }
  bool skew() const noexcept {
    return kind_ == ProblemKind::diagonal_skew || kind_ == ProblemKind::fd_advection_1d_periodic;
  }
  /// Largest |eigenvalue|.
  double spectral_radius() const;

  /// Coordinates in the orthonormal eigenbasis (matrix kinds only), ordered
  /// like eigenvalues(); from_eigenbasis is the inverse.
  std::vector<cplx> to_eigenbasis(std::span<const cplx> x) const;
  std::vector<cplx> from_eigenbasis(std::span<const cplx> c) const;

  /// Copy with extra eigenvalues appended (diagonal kinds only).
  ModelProblem with_injected(const std::vector<cplx>& extra) const;

 private:
  ProblemKind kind_;
  std::vector<cplx> eig_;
  std::optional<TridiagonalMatrix> matrix_;
  double h_x_;
};

/// n log-spaced eigenvalues from xi_max * 10^-decades up to xi_max (inclusive).
ModelProblem make_spd_interval(double xi_max, int n, double decades = 2.0);
/// (1/h^2) tridiag(-1, 2, -1), Dirichlet, h = 1/(M+1).
ModelProblem make_fd_diffusion(int m);
/// Central differences (u_{i+1} - u_{i-1}) / (2h) on a periodic grid of M points.
ModelProblem make_skew_advection(int m, double h_x);
/// n purely imaginary eigenvalues i*y, y log-spaced up to y_max (diagonal skew kind).
ModelProblem make_skew_interval(double y_max, int n, double decades = 2.0);

void write_spectrum_csv(std::ostream& os, const ModelProblem& p);
/// Reads `re,im` rows; the kind is inferred (all real positive, or all imaginary).
ModelProblem read_spectrum_csv(std::istream& is);

}  // namespace pintconv
