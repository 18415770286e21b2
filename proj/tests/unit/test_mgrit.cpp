#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pintconv/mgrit.hpp"
#include "pintconv/registry.hpp"

using namespace pintconv;

namespace {

MgritRun make_run(const char* fine, const char* coarse, int k, RelaxationScheme relax, ModelProblem problem,
                  long n = 64, double h_t = 1.0 / 64, int levels = 2) {
  return MgritRun{TimeHierarchy::make(scheme(fine), scheme(coarse), n, h_t, k, levels), std::move(problem), relax};
}

/// SPD spectrum with h_t * xi covering (0, w_max], plus the bound's argmax.
ModelProblem spd_window(double w_max, double h_t, const char* fine, const char* coarse, int k,
                        Relaxation r) {
  SweepOptions opt;
  opt.w_max = w_max;
  opt.w_min = w_max * 1e-4;
  const auto curve = sweep(BoundQuery::make(scheme(fine), scheme(coarse), k, r), opt);
  auto p = make_spd_interval(w_max / h_t, 24, 3.0);
  if (std::isfinite(curve.argmax_w) && curve.argmax_w < w_max) p = p.with_injected({cplx(curve.argmax_w / h_t, 0.0)});
  return p;
}

// bwe applied twice with half steps: its stability function over 2h equals lambda_bwe(h)^2
ButcherTableau two_half_bwe() {
  return ButcherTableau("bwe-2half", {0.5, 0.0, 0.5, 0.5}, {0.5, 0.5}, {0.5, 1.0}, 1,
                        StabilityClass::l_stable);
}

}  // namespace

TEST_CASE("step examples") {
  const ModelProblem one(ProblemKind::diagonal_spd, {cplx(1.0, 0.0)});
  const std::vector<cplx> u{cplx(1.0, 0.0)};
  CHECK(std::abs(step(scheme("bwe"), one, 1.0, u)[0] - 0.5) < 1e-15);

  const auto fd = make_fd_diffusion(3);
  const std::vector<cplx> zero(3, 0.0);
  for (const char* n : {"bwe", "esdirk33", "erk4"})
    for (auto path : {SpatialPath::diagonal, SpatialPath::matrix})
      for (const auto& v : step(scheme(n), fd, 0.01, zero, path)) CHECK(v == cplx(0.0, 0.0));

  // matrix path vs diagonal path in the eigenbasis (sine transform oracle)
  const std::vector<cplx> e1{1.0, 0.0, 0.0};
  const auto direct = step(scheme("sdirk22"), fd, 0.01, e1, SpatialPath::matrix);
  const auto modal = step(scheme("sdirk22"), fd, 0.01, fd.to_eigenbasis(e1), SpatialPath::diagonal);
  const auto back = fd.from_eigenbasis(modal);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(direct[static_cast<std::size_t>(i)] - back[static_cast<std::size_t>(i)]) < 1e-10);
}

TEST_CASE("matrix path agrees with the eigen-decomposition for every DIRK scheme") {
  for (const auto& p : {make_fd_diffusion(9), make_skew_advection(10, 0.1)})
    for (const char* n : {"bwe", "trapezoid", "sdirk23", "sdirk33", "sdirk34", "esdirk32", "esdirk33", "trbdf2", "erk3"}) {
      std::vector<cplx> x(p.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(1.0 + 3.0 * i);
      const auto direct = step(scheme(n), p, 0.02, x, SpatialPath::matrix);
      const auto back = p.from_eigenbasis(step(scheme(n), p, 0.02, p.to_eigenbasis(x), SpatialPath::diagonal));
      for (std::size_t i = 0; i < x.size(); ++i) CHECK_MESSAGE(std::abs(direct[i] - back[i]) < 1e-10, n);
    }
  CHECK_THROWS_AS(step(scheme("gauss4"), make_fd_diffusion(4), 0.1, std::vector<cplx>(4, 1.0), SpatialPath::matrix),
                  ConfigError);
}

TEST_CASE("hierarchy validation") {
  CHECK_THROWS_AS(TimeHierarchy::make(scheme("bwe"), scheme("bwe"), 10, 0.1, 4), ConfigError);
  CHECK_THROWS_AS(TimeHierarchy::make(scheme("bwe"), scheme("bwe"), 16, 0.1, 2, 6), ConfigError);
  const auto h = TimeHierarchy::make(scheme("bwe"), scheme("bwe"), 64, 0.1, 2, 4);
  CHECK(h.steps_on_level(3) == 8);
  CHECK(h.step_on_level(2) == doctest::Approx(0.4));

  auto run = make_run("bwe", "bwe", 2, RelaxationScheme::FCF, make_spd_interval(10, 4));
  run.theta_schedule = {0.5};
  CHECK_THROWS_AS(run.validate(), ConfigError);
}

TEST_CASE("relaxation") {
  const auto run = make_run("sdirk22", "bwe", 4, RelaxationScheme::F, make_spd_interval(100, 5), 32, 1.0 / 32);
  MgritSolver solver(run);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  SpaceTimeVector rhs = solver.make_vector();
  for (auto& v : rhs.data()) v = normal(rng);

  // exact solution by sequential stepping is a fixed point of F-relaxation
  SpaceTimeVector exact = solver.make_vector();
  {
    SpaceTimeVector tmp = solver.make_vector();
    std::copy(rhs.row(0).begin(), rhs.row(0).end(), exact.row(0).begin());
    for (long n = 1; n < exact.points(); ++n) {
      Stepper(scheme("sdirk22"), run.problem, run.hierarchy.h_t, SpatialPath::diagonal).apply(exact.row(n - 1), exact.row(n));
      for (std::size_t d = 0; d < exact.dofs(); ++d) exact.row(n)[d] += rhs.row(n)[d];
    }
  }
  SpaceTimeVector relaxed = exact;
  solver.f_relax(0, relaxed, rhs);
  for (std::size_t i = 0; i < exact.data().size(); ++i) CHECK(std::abs(relaxed.data()[i] - exact.data()[i]) < 1e-12);
  CHECK(solver.residual_norm(0, exact, rhs) < 1e-12);

  // after F-relaxation the residual vanishes at F-points
  SpaceTimeVector u = solver.initial_guess(9);
  solver.f_relax(0, u, rhs);
  const auto r = solver.residual(0, u, rhs);
  double rhs_norm = 0.0;
  for (const auto& v : rhs.data()) rhs_norm += std::norm(v);
  rhs_norm = std::sqrt(rhs_norm);
  for (long n = 0; n < r.points(); ++n) {
    if (n % 4 == 0) continue;
    for (const auto& v : r.row(n)) CHECK(std::abs(v) <= 1e-12 * rhs_norm);
  }
}

TEST_CASE("FCF relaxation leaves residual only at C-points (dense oracle)") {
  const int k = 4;
  const long n = 2 * k;
  const double h = 0.3;
  const ModelProblem one(ProblemKind::diagonal_spd, {cplx(2.0, 0.0)});
  const auto run = make_run("esdirk33", "bwe", k, RelaxationScheme::FCF, one, n, h);
  MgritSolver solver(run);
  SpaceTimeVector u = solver.initial_guess(5);
  const SpaceTimeVector rhs = solver.make_vector();
  solver.relax(0, u, rhs, RelaxationScheme::FCF);

  // dense space-time operator: rows u_0 = g_0 and u_i - lambda u_{i-1} = g_i
  const cplx lam = oracle::determinant_form(scheme("esdirk33"), h * 2.0);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  for (long i = 1; i <= n; ++i) a(i, i - 1) = -lam;
  Eigen::VectorXcd x(n + 1);
  for (long i = 0; i <= n; ++i) x(i) = u.row(i)[0];
  const Eigen::VectorXcd res = -(a * x);
  for (long i = 0; i <= n; ++i) {
    if (i % k == 0) continue;
    CHECK(std::abs(res(i)) < 1e-12);
  }
  CHECK(std::abs(res(2 * k)) > 1e-6);
}

TEST_CASE("coarse propagator equal to Phi^k converges in one cycle") {
  const auto p = make_spd_interval(50, 6);
  MgritRun run{TimeHierarchy{32, 1.0 / 16, 2, 2, PropagatorSpec::uniform(scheme("bwe"), 2), two_half_bwe()}, p,
               RelaxationScheme::F};
  MgritSolver solver(run);
  SpaceTimeVector u = solver.initial_guess(11);
  const auto hist = solver.iterate(u, 1);
  CHECK(hist[1] < 1e-13 * hist[0]);
}

TEST_CASE("exactness after N_c iterations") {
  for (const char* f : {"bwe", "sdirk33", "esdirk33"}) {
    for (auto relax : {RelaxationScheme::F, RelaxationScheme::FCF}) {
      const auto run = make_run(f, "bwe", 4, relax, make_spd_interval(400, 7), 32, 1.0 / 32);
      MgritSolver solver(run);
      SpaceTimeVector u = solver.initial_guess(2);
      const auto hist = solver.iterate(u, static_cast<int>(solver.exactness_iteration()));
      CHECK_MESSAGE(hist.back() < 1e-10 * hist.front(), f << " " << to_string(relax));
    }
  }
}

TEST_CASE("dense two-level error propagator lies inside the tight bounds") {
  // N = 16, k = 4, BWE/BWE: assemble E_F column by column from unit C-point errors
  const int k = 4;
  const int nc = 4;
  const double h = 1.0 / 16;
  for (double xi : {2.0, 16.0, 60.0}) {
    const ModelProblem one(ProblemKind::diagonal_spd, {cplx(xi, 0.0)});
    const auto run = make_run("bwe", "bwe", k, RelaxationScheme::F, one, nc * k, h);
    MgritSolver solver(run);
    Eigen::MatrixXcd e(nc, nc);
    for (int col = 0; col < nc; ++col) {
      SpaceTimeVector u = solver.make_vector();
      u.row((col + 1) * k)[0] = 1.0;
      solver.iterate(u, 1);
      for (int row = 0; row < nc; ++row) e(row, col) = u.row((row + 1) * k)[0];
    }
    const double w = h * xi;
    const auto oracle_e = oracle::two_level_error_matrix(std::pow(1.0 / (1.0 + w), k), 1.0 / (1.0 + k * w), nc);
    CHECK((e - oracle_e).norm() < 1e-13);

    auto q = BoundQuery::make(scheme("bwe"), scheme("bwe"), k, Relaxation::F);
    q.nc = nc;
    q.kind = BoundKind::lower_tight;
    const double lo = pointwise_bound(q, w);
    q.kind = BoundKind::upper_tight;
    const double up = pointwise_bound(q, w);
    const double norm = oracle::spectral_norm(e);
    CHECK(lo <= norm * (1 + 1e-12));
    CHECK(norm <= up * (1 + 1e-12));
  }
}

TEST_CASE("measure_rho examples") {
  const double ht = 1.0 / 4096;
  {
    auto run = make_run("bwe", "bwe", 2, RelaxationScheme::F,
                        spd_window(1.66, ht, "bwe", "bwe", 2, Relaxation::F), 4096, ht);
    const auto r = measure_rho(run);
    CHECK(std::abs(r.rho - 0.12) <= 0.02);
    CHECK(r.converged);
  }
  {
    auto run = make_run("esdirk33", "esdirk33", 4, RelaxationScheme::FCF,
                        spd_window(1.5, ht, "esdirk33", "esdirk33", 4, Relaxation::FCF), 4096, ht);
    CHECK(std::abs(measure_rho(run).rho - 0.02) <= 0.01);
  }
  {
    const double h512 = 1.0 / 512;
    auto run = make_run("trapezoid", "trapezoid", 2, RelaxationScheme::FCF,
                        spd_window(12.0, h512, "trapezoid", "trapezoid", 2, Relaxation::FCF), 512, h512);
    const auto r = measure_rho(run);
    CHECK(!r.converged);
    CHECK(r.rho > 1.0);
  }
  {
    const double h1024 = 1.0 / 1024;
    auto run = make_run("esdirk33", "esdirk32", 4, RelaxationScheme::FCF,
                        spd_window(6.0, h1024, "esdirk33", "esdirk32", 4, Relaxation::FCF), 1024, h1024);
    CHECK(std::abs(measure_rho(run).rho - 0.01) <= 0.005);
  }
}

TEST_CASE("measured rho stays within the tight bounds") {
  struct Case {
    const char* fine;
    const char* coarse;
    int k;
    RelaxationScheme relax;
    double w_max;
  };
  const Case cases[] = {{"bwe", "bwe", 2, RelaxationScheme::F, 1.66},
                        {"bwe", "bwe", 8, RelaxationScheme::FCF, 1.66},
                        {"sdirk33", "sdirk33", 4, RelaxationScheme::F, 5.88},
                        {"esdirk33", "bwe", 4, RelaxationScheme::F, 6.0},
                        {"sdirk22", "sdirk22", 2, RelaxationScheme::F, 12.0}};
  const long n = 2048;
  const double ht = 1.0 / 2048;
  for (const auto& c : cases) {
    const auto relax = c.relax == RelaxationScheme::F ? Relaxation::F : Relaxation::FCF;
    auto run = make_run(c.fine, c.coarse, c.k, c.relax, spd_window(c.w_max, ht, c.fine, c.coarse, c.k, relax), n, ht);
    const double rho = measure_rho(run, 5).rho;
    auto q = BoundQuery::make(scheme(c.fine), scheme(c.coarse), c.k, relax);
    q.nc = n / c.k;
    double lo = 0.0, up = 0.0;
    for (const auto& xi : run.problem.eigenvalues()) {
      q.kind = BoundKind::lower_tight;
      lo = std::max(lo, pointwise_bound(q, ht * xi));
      q.kind = BoundKind::upper_tight;
      up = std::max(up, pointwise_bound(q, ht * xi));
    }
    CHECK_MESSAGE(rho >= lo - 0.02, c.fine << "/" << c.coarse << " k=" << c.k << " rho=" << rho << " lo=" << lo);
    CHECK_MESSAGE(rho <= up + 0.02, c.fine << "/" << c.coarse << " k=" << c.k << " rho=" << rho << " up=" << up);
  }
}

TEST_CASE("theta schedule (1, 0) equals one FCF cycle") {
  for (const char* f : {"esdirk33", "sdirk22"}) {
    const auto p = make_spd_interval(3000, 12);
    auto run_f = make_run(f, "esdirk32", 4, RelaxationScheme::F, p, 256, 1.0 / 512);
    run_f.theta_schedule = {1.0, 0.0};
    auto run_fcf = make_run(f, "esdirk32", 4, RelaxationScheme::FCF, p, 256, 1.0 / 512);
    MgritSolver sf(run_f), sfcf(run_fcf);
    SpaceTimeVector a = sf.initial_guess(4);
    SpaceTimeVector b = a;
    sf.iterate(a, 2);
    sfcf.iterate(b, 1);
    const auto rhs = sf.make_vector();
    const auto ra = sf.residual(0, a, rhs);
    const auto rb = sfcf.residual(0, b, rhs);
    double scale = 0.0;
    for (const auto& v : rb.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < ra.data().size(); ++i)
      CHECK(std::abs(ra.data()[i] - rb.data()[i]) <= 1e-10 * std::max(scale, 1e-300));
  }
}

TEST_CASE("linearity and determinism") {
  auto run = make_run("sdirk33", "bwe", 4, RelaxationScheme::FCF, make_spd_interval(5000, 16), 1024, 1.0 / 1024);
  MgritSolver solver(run);
  SpaceTimeVector u = solver.initial_guess(8);
  SpaceTimeVector u2 = u;
  for (auto& v : u2.data()) v *= 2.0;
  const auto h1 = solver.iterate(u, 6);
  const auto h2 = solver.iterate(u2, 6);
  for (std::size_t i = 0; i < h1.size(); ++i) CHECK(h2[i] == 2.0 * h1[i]);

  run.workers = 4;
  MgritSolver parallel(run);
  SpaceTimeVector u3 = parallel.initial_guess(8);
  const auto h3 = parallel.iterate(u3, 6);
  for (std::size_t i = 0; i < h1.size(); ++i) CHECK(h3[i] == h1[i]);
}

TEST_CASE("diagonal and matrix paths give the same history") {
  for (const auto& p : {make_fd_diffusion(12), make_skew_advection(16, 1.0 / 16)}) {
    auto diag = make_run("sdirk22", "bwe", 4, RelaxationScheme::FCF, p, 128, 1.0 / 128);
    auto mat = diag;
    mat.path = SpatialPath::matrix;
    MgritSolver sd(diag), sm(mat);
    SpaceTimeVector um = sm.initial_guess(6);
    SpaceTimeVector ud = sd.make_vector();
    for (long n = 0; n < um.points(); ++n) {
      const auto c = p.to_eigenbasis(um.row(n));
      std::copy(c.begin(), c.end(), ud.row(n).begin());
    }
    const auto rd = sd.solve(ud);
    const auto rm = sm.solve(um);
    REQUIRE(rd.history.size() == rm.history.size());
    for (std::size_t i = 0; i < rd.history.size(); ++i)
      CHECK(std::abs(rd.history[i] - rm.history[i]) <= 1e-9 * rd.history[i] + 1e-300);
    CHECK(std::abs(rd.rho - rm.rho) <= 1e-6);
  }
}

TEST_CASE("multilevel V-cycles converge") {
  for (int levels : {2, 3, 5}) {
    auto run = make_run("bwe", "bwe", 2, RelaxationScheme::FCF, make_spd_interval(1.66 * 1024, 16), 1024, 1.0 / 1024, levels);
    const auto r = measure_rho(run);
    CHECK(r.converged);
    CHECK(r.rho < 0.2);
  }
}

TEST_CASE("run CSV") {
  RunResult r;
  r.rho = 0.25;
  r.history = {1.0, 0.25};
  r.converged = true;
  r.iterations = 1;
  std::ostringstream os;
  write_run_csv(os, r);
  CHECK(os.str() == "iter,residual_norm\n0,1\n1,0.25\n# rho=0.25\n# converged=true\n# iters=1\n");
}
