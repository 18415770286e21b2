#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "pintconv/bounds.hpp"
#include "pintconv/butcher.hpp"
#include "pintconv/model_problems.hpp"

namespace pintconv {

enum class RelaxationScheme { F, FC, FCF };
enum class SpatialPath { diagonal, matrix };

std::string_view to_string(RelaxationScheme r);

/// Time grids: level l has N / k^l intervals of width k^l h_t. Level 0 steps
/// with `fine` (its k unit steps repeat every coarse interval); levels >= 1
/// step with `coarse`.
struct TimeHierarchy {
  long n_steps = 0;
  double h_t = 0.0;
  int k = 2;
  int levels = 2;
  PropagatorSpec fine;
  ButcherTableau coarse;

  static TimeHierarchy make(const ButcherTableau& fine, const ButcherTableau& coarse, long n_steps,
                            double h_t, int k, int levels = 2);
  void validate() const;
  long steps_on_level(int level) const;
  double step_on_level(int level) const;
};

struct InitialError {
  enum class Kind { random_seeded, worst_mode };
  Kind kind = Kind::random_seeded;
  std::uint64_t seed = 1;
  double w_star = 0.0;  ///< worst_mode: excite only the mode with h_t*|xi| closest to this
};

struct MgritRun {
  TimeHierarchy hierarchy;
  ModelProblem problem;
  RelaxationScheme relaxation = RelaxationScheme::F;
  /// theta for iteration i (0-based); missing entries mean 1.
  std::vector<double> theta_schedule;
  InitialError initial_error;
  double tol = 1e-13;  ///< relative to the initial residual norm
  int max_iters = 100;
  SpatialPath path = SpatialPath::diagonal;
  unsigned workers = 1;
  double divergence_factor = 1e6;

  void validate() const;
};

/// (time point, dof) array; row n holds the state at t_n.
class SpaceTimeVector {
 public:
  SpaceTimeVector(long points, std::size_t dofs);
  long points() const noexcept { return points_; }
  std::size_t dofs() const noexcept { return dofs_; }
  std::span<cplx> row(long n) { return {data_.data() + static_cast<std::size_t>(n) * dofs_, dofs_}; }
  std::span<const cplx> row(long n) const {
    return {data_.data() + static_cast<std::size_t>(n) * dofs_, dofs_};
  }
  std::vector<cplx>& data() noexcept { return data_; }
  const std::vector<cplx>& data() const noexcept { return data_; }
  void fill_zero();

 private:
  long points_;
  std::size_t dofs_;
  std::vector<cplx> data_;
};

/// One Runge-Kutta step u -> Phi(dt) u for u' = -L u.
/// Diagonal path: u holds eigen-coordinates and is scaled by lambda(dt xi_j).
/// Matrix path: DIRK stage solves with the tridiagonal realization.
class Stepper {
 public:
  Stepper(const ButcherTableau& tab, const ModelProblem& problem, double dt, SpatialPath path,
          double scale = 1.0);
  /// out = scale * Phi in; `in` and `out` must not overlap.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  ButcherTableau tab_;
  const ModelProblem* problem_;
  double dt_;
  SpatialPath path_;
  double scale_;
  std::vector<cplx> factors_;
};

std::vector<cplx> step(const ButcherTableau& tab, const ModelProblem& problem, double dt,
                       std::span<const cplx> u, SpatialPath path = SpatialPath::diagonal);

struct RunResult {
  double rho = 0.0;
  std::vector<double> history;  ///< residual norms, history[0] is the initial one
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
};

class MgritSolver {
 public:
  /// Keeps a reference to `run`; it must outlive the solver.
  explicit MgritSolver(const MgritRun& run);
  ~MgritSolver();
  MgritSolver(const MgritSolver&) = delete;
  MgritSolver& operator=(const MgritSolver&) = delete;

  const MgritRun& run() const noexcept { return run_; }
  SpaceTimeVector make_vector(int level = 0) const;
  SpaceTimeVector initial_guess(std::uint64_t seed) const;

  void relax(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs, RelaxationScheme scheme) const;
  void f_relax(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs) const;
  void c_relax(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs) const;
  /// One cycle on `level` (< levels - 1) with coarse operator scaled by theta.
  void vcycle(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs, double theta = 1.0) const;
  /// Residual rhs - A u on `level`.
  SpaceTimeVector residual(int level, const SpaceTimeVector& u, const SpaceTimeVector& rhs) const;
  double residual_norm(int level, const SpaceTimeVector& u, const SpaceTimeVector& rhs) const;

  /// Runs exactly `iterations` cycles on the homogeneous problem; returns the residual history.
  std::vector<double> iterate(SpaceTimeVector& u, int iterations) const;
  /// Iterates until tol, divergence or max_iters and measures rho.
  RunResult solve(SpaceTimeVector& u) const;

  /// Iteration count at which the two-level method is exact: N_c for F,
  /// ceil(N_c / 2) for FC and FCF.
  long exactness_iteration() const;

 private:
  void apply_step(int level, long n, std::span<const cplx> in, std::span<cplx> out,
                  double theta = 1.0) const;

  const MgritRun& run_;
  struct Levels;
  std::unique_ptr<Levels> levels_;
};

/// rho over `seeds` consecutive seeds starting at run.initial_error.seed (max rho reported).
RunResult measure_rho(const MgritRun& run, int seeds = 1);

void write_run_csv(std::ostream& os, const RunResult& result);

}  // namespace pintconv
