#include "pintconv/mgrit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pintconv/parallel.hpp"
#include "pintconv/text.hpp"

namespace pintconv {

std::string_view to_string(RelaxationScheme r) {
  switch (r) {
    case RelaxationScheme::F: return "F";
    case RelaxationScheme::FC: return "FC";
    case RelaxationScheme::FCF: return "FCF";
  }
  return "F";
}

// ---------------------------------------------------------------- hierarchy

TimeHierarchy TimeHierarchy::make(const ButcherTableau& fine, const ButcherTableau& coarse,
                                  long n_steps, double h_t, int k, int levels) {
  TimeHierarchy h{n_steps, h_t, k, levels, PropagatorSpec::uniform(fine, k), coarse};
  h.validate();
  return h;
}

void TimeHierarchy::validate() const {
  if (k < 2) throw ConfigError("coarsening factor must be >= 2");
  if (levels < 2) throw ConfigError("need at least two levels");
  if (!(h_t > 0.0)) throw ConfigError("h_t must be positive");
  if (fine.steps().size() != static_cast<std::size_t>(k))
    throw ConfigError("fine propagator must hold exactly k steps");
  for (const auto& st : fine.steps())
    if (st.step_fraction != 1.0) throw ConfigError("fine propagator steps must have fraction 1");
  long div = 1;
  for (int l = 1; l < levels; ++l) {
    if (div > n_steps / k) throw ConfigError("too many levels for N = " + std::to_string(n_steps));
    div *= k;
  }
  if (n_steps <= 0 || n_steps % div != 0)
    throw ConfigError("N = " + std::to_string(n_steps) + " is not divisible by k^(L-1) = " +
                      std::to_string(div));
}

long TimeHierarchy::steps_on_level(int level) const {
  long n = n_steps;
  for (int l = 0; l < level; ++l) n /= k;
  return n;
}

double TimeHierarchy::step_on_level(int level) const {
  return h_t * std::pow(static_cast<double>(k), level);
}

void MgritRun::validate() const {
  hierarchy.validate();
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  for (double th : theta_schedule) {
    if (!(th >= 0.0 && th <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
    if (th != 1.0 && (hierarchy.levels != 2 || relaxation != RelaxationScheme::F))
      throw ConfigError("theta != 1 needs two levels and F-relaxation");
  }
  if (path == SpatialPath::matrix && !problem.matrix())
    throw ConfigError("matrix path needs a problem with a matrix realization");
}

// ---------------------------------------------------------------- vectors

SpaceTimeVector::SpaceTimeVector(long points, std::size_t dofs)
    : points_(points), dofs_(dofs), data_(static_cast<std::size_t>(points) * dofs, cplx(0.0, 0.0)) {}

void SpaceTimeVector::fill_zero() { std::fill(data_.begin(), data_.end(), cplx(0.0, 0.0)); }

// ---------------------------------------------------------------- stepping

Stepper::Stepper(const ButcherTableau& tab, const ModelProblem& problem, double dt, SpatialPath path,
                 double scale)
    : tab_(tab), problem_(&problem), dt_(dt), path_(path), scale_(scale) {
  if (path_ == SpatialPath::diagonal) {
    factors_.reserve(problem.size());
    for (const cplx& xi : problem.eigenvalues()) {
      try {
        factors_.push_back(scale_ * stability_eval(tab_, dt_ * xi));
      } catch (const PoleError& e) {
        throw SolveError(std::string("singular stage system: ") + e.what());
      }
    }
  } else {
    if (!problem.matrix()) throw ConfigError("matrix path needs a matrix realization");
    if (!tab_.is_diagonally_implicit())
      throw ConfigError(tab_.name() + " is not diagonally implicit; unsupported on the matrix path");
  }
}

void Stepper::apply(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t m = in.size();
  if (path_ == SpatialPath::diagonal) {
    for (std::size_t j = 0; j < m; ++j) out[j] = factors_[j] * in[j];
    return;
  }
  const TridiagonalMatrix& a = *problem_->matrix();
  const int s = tab_.stages();
  std::vector<std::vector<cplx>> kst(static_cast<std::size_t>(s), std::vector<cplx>(m));
  std::vector<cplx> stage(m);
  for (int i = 0; i < s; ++i) {
    std::copy(in.begin(), in.end(), stage.begin());
    for (int j = 0; j < i; ++j) {
      const double aij = tab_.a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t d = 0; d < m; ++d) stage[d] -= dt_ * aij * kst[static_cast<std::size_t>(j)][d];
    }
    if (const double aii = tab_.a(i, i); aii != 0.0) a.solve_shifted(dt_ * aii, stage);
    a.apply(stage, kst[static_cast<std::size_t>(i)]);
  }
  for (std::size_t d = 0; d < m; ++d) {
    cplx acc = in[d];
    for (int j = 0; j < s; ++j) acc -= dt_ * tab_.b()[static_cast<std::size_t>(j)] * kst[static_cast<std::size_t>(j)][d];
    out[d] = scale_ * acc;
  }
}

std::vector<cplx> step(const ButcherTableau& tab, const ModelProblem& problem, double dt,
                       std::span<const cplx> u, SpatialPath path) {
  std::vector<cplx> out(u.size());
  Stepper(tab, problem, dt, path).apply(u, out);
  return out;
}

// ---------------------------------------------------------------- solver

struct MgritSolver::Levels {
  std::vector<std::vector<Stepper>> steppers;  // level -> steppers (level 0: one per fine step)
};

MgritSolver::MgritSolver(const MgritRun& run) : run_(run), levels_(std::make_unique<Levels>()) {
  run_.validate();
  const auto& h = run_.hierarchy;
  for (int l = 0; l < h.levels; ++l) {
    std::vector<Stepper> st;
    if (l == 0) {
      for (const auto& fs : h.fine.steps())
        st.emplace_back(fs.tableau, run_.problem, fs.step_fraction * h.h_t, run_.path);
    } else {
      st.emplace_back(h.coarse, run_.problem, h.step_on_level(l), run_.path);
    }
    levels_->steppers.push_back(std::move(st));
  }
}

MgritSolver::~MgritSolver() = default;

SpaceTimeVector MgritSolver::make_vector(int level) const {
  return SpaceTimeVector(run_.hierarchy.steps_on_level(level) + 1, run_.problem.size());
}

SpaceTimeVector MgritSolver::initial_guess(std::uint64_t seed) const {
  SpaceTimeVector u = make_vector(0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool complex_entries = run_.path == SpatialPath::diagonal && run_.problem.skew();
  const std::size_t m = run_.problem.size();

  std::size_t only_mode = m;
  if (run_.initial_error.kind == InitialError::Kind::worst_mode) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const double w = run_.hierarchy.h_t * std::abs(run_.problem.eigenvalues()[j]);
      const double dist = std::abs(std::log(w / run_.initial_error.w_star));
      if (dist < best) {
        best = dist;
        only_mode = j;
      }
    }
  }

  for (long n = 1; n < u.points(); ++n) {
    auto row = u.row(n);
    if (only_mode < m) {
      std::vector<cplx> coeffs(m, cplx(0.0, 0.0));
      coeffs[only_mode] = cplx(normal(rng), run_.problem.skew() ? normal(rng) : 0.0);
      const auto phys = run_.path == SpatialPath::matrix ? run_.problem.from_eigenbasis(coeffs) : coeffs;
      std::copy(phys.begin(), phys.end(), row.begin());
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double re = normal(rng);
      row[j] = complex_entries ? cplx(re, normal(rng)) : cplx(re, 0.0);
    }
  }
  return u;
}

void MgritSolver::apply_step(int level, long n, std::span<const cplx> in, std::span<cplx> out,
                             double theta) const {
  const auto& st = levels_->steppers[static_cast<std::size_t>(level)];
  st[static_cast<std::size_t>((n - 1) % static_cast<long>(st.size()))].apply(in, out);
  if (theta != 1.0)
    for (auto& v : out) v *= theta;
}

void MgritSolver::f_relax(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs) const {
  const int k = run_.hierarchy.k;
  const long nc = (u.points() - 1) / k;
  parallel_for(static_cast<std::size_t>(nc), run_.workers, [&](std::size_t c) {
    const long base = static_cast<long>(c) * k;
    for (int i = 1; i < k; ++i) {
      const long n = base + i;
      auto out = u.row(n);
      apply_step(level, n, u.row(n - 1), out);
      const auto g = rhs.row(n);
      for (std::size_t d = 0; d < out.size(); ++d) out[d] += g[d];
    }
  });
}

void MgritSolver::c_relax(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs) const {
  const int k = run_.hierarchy.k;
  const long nc = (u.points() - 1) / k;
  {
    auto out = u.row(0);
    const auto g = rhs.row(0);
    std::copy(g.begin(), g.end(), out.begin());
  }
  parallel_for(static_cast<std::size_t>(nc), run_.workers, [&](std::size_t c) {
    const long n = (static_cast<long>(c) + 1) * k;
    auto out = u.row(n);
    apply_step(level, n, u.row(n - 1), out);
    const auto g = rhs.row(n);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += g[d];
  });
}

void MgritSolver::relax(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs,
                        RelaxationScheme scheme) const {
  f_relax(level, u, rhs);
  if (scheme == RelaxationScheme::F) return;
  c_relax(level, u, rhs);
  if (scheme == RelaxationScheme::FCF) f_relax(level, u, rhs);
}

SpaceTimeVector MgritSolver::residual(int level, const SpaceTimeVector& u,
                                      const SpaceTimeVector& rhs) const {
  SpaceTimeVector r(u.points(), u.dofs());
  {
    auto out = r.row(0);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] = rhs.row(0)[d] - u.row(0)[d];
  }
  parallel_for(static_cast<std::size_t>(u.points() - 1), run_.workers, [&](std::size_t i) {
    const long n = static_cast<long>(i) + 1;
    auto out = r.row(n);
    apply_step(level, n, u.row(n - 1), out);
    const auto g = rhs.row(n);
    const auto un = u.row(n);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += g[d] - un[d];
  });
  return r;
}

double MgritSolver::residual_norm(int level, const SpaceTimeVector& u,
                                  const SpaceTimeVector& rhs) const {
  const SpaceTimeVector r = residual(level, u, rhs);
  // per-row partial sums, then an ordered total: independent of worker count
  std::vector<double> partial(static_cast<std::size_t>(r.points()), 0.0);
  parallel_for(partial.size(), run_.workers, [&](std::size_t n) {
    double acc = 0.0;
    for (const cplx& v : r.row(static_cast<long>(n))) acc += std::norm(v);
    partial[n] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return std::sqrt(total);
}

void MgritSolver::vcycle(int level, SpaceTimeVector& u, const SpaceTimeVector& rhs, double theta) const {
  const int levels = run_.hierarchy.levels;
  if (level < 0 || level >= levels - 1) throw ConfigError("vcycle: invalid level");
  const int k = run_.hierarchy.k;
  relax(level, u, rhs, run_.relaxation);

  // restrict the residual by injection at C-points
  const long nc = (u.points() - 1) / k;
  SpaceTimeVector coarse_rhs(nc + 1, u.dofs());
  {
    std::vector<cplx> tmp(u.dofs());
    for (long c = 0; c <= nc; ++c) {
      const long n = c * k;
      auto out = coarse_rhs.row(c);
      if (n == 0) {
        for (std::size_t d = 0; d < out.size(); ++d) out[d] = rhs.row(0)[d] - u.row(0)[d];
        continue;
      }
      apply_step(level, n, u.row(n - 1), tmp);
      for (std::size_t d = 0; d < out.size(); ++d) out[d] = rhs.row(n)[d] - u.row(n)[d] + tmp[d];
    }
  }

  SpaceTimeVector e(nc + 1, u.dofs());
  if (level + 1 == levels - 1) {
    // exact sequential solve on the coarsest grid
    auto first = e.row(0);
    std::copy(coarse_rhs.row(0).begin(), coarse_rhs.row(0).end(), first.begin());
    for (long c = 1; c <= nc; ++c) {
      auto out = e.row(c);
      apply_step(level + 1, c, e.row(c - 1), out, theta);
      const auto g = coarse_rhs.row(c);
      for (std::size_t d = 0; d < out.size(); ++d) out[d] += g[d];
    }
  } else {
    vcycle(level + 1, e, coarse_rhs, theta);
  }

  for (long c = 0; c <= nc; ++c) {
    auto dst = u.row(c * k);
    const auto corr = e.row(c);
    for (std::size_t d = 0; d < dst.size(); ++d) dst[d] += corr[d];
  }
  f_relax(level, u, rhs);
}

long MgritSolver::exactness_iteration() const {
  const long nc = run_.hierarchy.steps_on_level(1);
  return run_.relaxation == RelaxationScheme::F ? nc : (nc + 1) / 2;
}

std::vector<double> MgritSolver::iterate(SpaceTimeVector& u, int iterations) const {
  const SpaceTimeVector rhs = make_vector(0);
  std::vector<double> history{residual_norm(0, u, rhs)};
  for (int it = 0; it < iterations; ++it) {
    const double theta =
        static_cast<std::size_t>(it) < run_.theta_schedule.size() ? run_.theta_schedule[static_cast<std::size_t>(it)] : 1.0;
    vcycle(0, u, rhs, theta);
    history.push_back(residual_norm(0, u, rhs));
  }
  return history;
}

RunResult MgritSolver::solve(SpaceTimeVector& u) const {
  const SpaceTimeVector rhs = make_vector(0);
  RunResult res;
  res.history.push_back(residual_norm(0, u, rhs));
  const double r0 = res.history.front();
  if (r0 == 0.0) {
    res.converged = true;
    return res;
  }
  for (int it = 0; it < run_.max_iters; ++it) {
    const double theta =
        static_cast<std::size_t>(it) < run_.theta_schedule.size() ? run_.theta_schedule[static_cast<std::size_t>(it)] : 1.0;
    vcycle(0, u, rhs, theta);
    const double r = residual_norm(0, u, rhs);
    res.history.push_back(r);
    res.iterations = it + 1;
    if (r < run_.tol * r0) {
      res.converged = true;
      break;
    }
    if (!(r <= run_.divergence_factor * r0)) {
      res.diverged = true;
      break;
    }
  }

  // ratios r_i / r_{i-1} for i >= 2, dropping those near the exactness point
  const long exact = exactness_iteration();
  const auto& h = res.history;
  double rho = 0.0;
  bool any = false;
  for (std::size_t i = 2; i < h.size(); ++i) {
    if (static_cast<long>(i) >= exact - 2) break;
    if (h[i - 1] == 0.0) break;
    rho = std::max(rho, h[i] / h[i - 1]);
    any = true;
  }
  if (!any && h.size() >= 2 && h[0] > 0.0) rho = h[1] / h[0];
  res.rho = rho;
  return res;
}

RunResult measure_rho(const MgritRun& run, int seeds) {
  if (seeds < 1) throw ConfigError("need at least one seed");
  MgritSolver solver(run);
  RunResult worst;
  bool first = true;
  bool all_converged = true;
  bool any_diverged = false;
  for (int s = 0; s < seeds; ++s) {
    SpaceTimeVector u = solver.initial_guess(run.initial_error.seed + static_cast<std::uint64_t>(s));
    RunResult r = solver.solve(u);
    all_converged = all_converged && r.converged;
    any_diverged = any_diverged || r.diverged;
    if (first || r.rho > worst.rho) worst = std::move(r);
    first = false;
  }
  worst.converged = all_converged;
  worst.diverged = any_diverged;
  return worst;
}

void write_run_csv(std::ostream& os, const RunResult& result) {
  os << "iter,residual_norm\n";
  for (std::size_t i = 0; i < result.history.size(); ++i)
    os << i << ',' << format_real(result.history[i]) << '\n';
  os << "# rho=" << format_real(result.rho) << '\n'
     << "# converged=" << (result.converged ? "true" : "false") << '\n'
     << "# iters=" << result.iterations << '\n';
  if (result.diverged) os << "# diverged=true\n";
}

}  // namespace pintconv
