#include "pintconv/model_problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pintconv/text.hpp"

namespace pintconv {

std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::diagonal_spd: return "diagonal_spd";
    case ProblemKind::diagonal_skew: return "diagonal_skew";
    case ProblemKind::fd_diffusion_1d: return "fd_diffusion_1d";
    case ProblemKind::fd_advection_1d_periodic: return "fd_advection_1d_periodic";
  }
  return "diagonal_spd";
}

void TridiagonalMatrix::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const int n = size;
  for (int i = 0; i < n; ++i) {
    cplx acc = diag * x[static_cast<std::size_t>(i)];
    if (i > 0) acc += lower * x[static_cast<std::size_t>(i - 1)];
    else if (periodic) acc += lower * x[static_cast<std::size_t>(n - 1)];
    if (i + 1 < n) acc += upper * x[static_cast<std::size_t>(i + 1)];
    else if (periodic) acc += upper * x[0];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

namespace {

// Thomas algorithm for constant bands: (sub, main, super) with optional
// modification of the first and last diagonal entries.
void thomas(int n, double sub, double main_first, double main, double main_last, double super,
            std::span<cplx> d) {
  std::vector<double> cp(static_cast<std::size_t>(n));
  auto main_at = [&](int i) { return i == 0 ? main_first : (i == n - 1 ? main_last : main); };
  double denom = main_at(0);
  if (std::abs(denom) < 1e-300) throw SolveError("tridiagonal solve: zero pivot");
  cp[0] = super / denom;
  d[0] /= denom;
  for (int i = 1; i < n; ++i) {
    denom = main_at(i) - sub * cp[static_cast<std::size_t>(i - 1)];
    if (std::abs(denom) < 1e-300) throw SolveError("tridiagonal solve: zero pivot");
    cp[static_cast<std::size_t>(i)] = super / denom;
    d[static_cast<std::size_t>(i)] =
        (d[static_cast<std::size_t>(i)] - sub * d[static_cast<std::size_t>(i - 1)]) / denom;
  }
  for (int i = n - 2; i >= 0; --i)
    d[static_cast<std::size_t>(i)] -= cp[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i + 1)];
}

}  // namespace

void TridiagonalMatrix::solve_shifted(double c, std::span<cplx> rhs) const {
  const int n = size;
  const double sub = c * lower;
  const double main = 1.0 + c * diag;
  const double super = c * upper;
  if (!periodic || n < 3) {
    if (periodic) throw SolveError("periodic solve needs at least 3 points");
    thomas(n, sub, main, main, main, super, rhs);
    return;
  }
  // Sherman-Morrison with corners B(0, n-1) = sub and B(n-1, 0) = super:
  // B = T + u v^T, u = (gamma, 0.., super), v = (1, 0.., sub/gamma).
  const double gamma = -main;
  const double first = main - gamma;
  const double last = main - sub * super / gamma;
  thomas(n, sub, first, main, last, super, rhs);
  std::vector<cplx> z(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  z[0] = gamma;
  z[static_cast<std::size_t>(n - 1)] = super;
  thomas(n, sub, first, main, last, super, z);
  const cplx vy = rhs[0] + (sub / gamma) * rhs[static_cast<std::size_t>(n - 1)];
  const cplx vz = z[0] + (sub / gamma) * z[static_cast<std::size_t>(n - 1)];
  const cplx denom = 1.0 + vz;
  if (std::abs(denom) < 1e-300) throw SolveError("periodic solve: singular update");
  const cplx f = vy / denom;
  for (int i = 0; i < n; ++i) rhs[static_cast<std::size_t>(i)] -= f * z[static_cast<std::size_t>(i)];
}

std::vector<double> TridiagonalMatrix::dense() const {
  const auto n = static_cast<std::size_t>(size);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = diag;
    if (i > 0) a[i * n + i - 1] = lower;
    if (i + 1 < n) a[i * n + i + 1] = upper;
  }
  if (periodic) {
    a[0 * n + n - 1] += lower;
    a[(n - 1) * n + 0] += upper;
  }
  return a;
}

ModelProblem::ModelProblem(ProblemKind kind, std::vector<cplx> eigenvalues,
                           std::optional<TridiagonalMatrix> matrix, double h_x)
    : kind_(kind), eig_(std::move(eigenvalues)), matrix_(std::move(matrix)), h_x_(h_x) {
  if (eig_.empty()) throw ConfigError("model problem needs at least one eigenvalue");
  for (const cplx& e : eig_) {
    if (skew() && e.real() != 0.0) throw ConfigError("skew problem with a non-imaginary eigenvalue");
    if (!skew() && (e.imag() != 0.0 || !(e.real() > 0.0)))
      throw ConfigError("SPD problem with a non-positive eigenvalue");
  }
  if (matrix_ && matrix_->size != static_cast<int>(eig_.size()))
    throw ConfigError("matrix size does not match the eigenvalue count");
}

double ModelProblem::spectral_radius() const {
  double r = 0.0;
  for (const cplx& e : eig_) r = std::max(r, std::abs(e));
  return r;
}

std::vector<cplx> ModelProblem::to_eigenbasis(std::span<const cplx> x) const {
  const int m = static_cast<int>(size());
  std::vector<cplx> out(size(), cplx(0.0, 0.0));
  if (kind_ == ProblemKind::fd_diffusion_1d) {
    const double norm = std::sqrt(2.0 / (m + 1));
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        out[static_cast<std::size_t>(j)] +=
            norm * std::sin((i + 1.0) * (j + 1.0) * std::numbers::pi / (m + 1)) *
            x[static_cast<std::size_t>(i)];
  } else if (kind_ == ProblemKind::fd_advection_1d_periodic) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        out[static_cast<std::size_t>(j)] +=
            norm * std::polar(1.0, -2.0 * std::numbers::pi * i * j / m) * x[static_cast<std::size_t>(i)];
  } else {
    std::copy(x.begin(), x.end(), out.begin());
  }
  return out;
}

std::vector<cplx> ModelProblem::from_eigenbasis(std::span<const cplx> c) const {
  const int m = static_cast<int>(size());
  std::vector<cplx> out(size(), cplx(0.0, 0.0));
  if (kind_ == ProblemKind::fd_diffusion_1d) {
    return to_eigenbasis(c);  // the sine transform is its own inverse
  } else if (kind_ == ProblemKind::fd_advection_1d_periodic) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out[static_cast<std::size_t>(i)] +=
            norm * std::polar(1.0, 2.0 * std::numbers::pi * i * j / m) * c[static_cast<std::size_t>(j)];
  } else {
    std::copy(c.begin(), c.end(), out.begin());
  }
  return out;
}

ModelProblem ModelProblem::with_injected(const std::vector<cplx>& extra) const {
  if (matrix_) throw ConfigError("cannot inject eigenvalues into a matrix problem");
  std::vector<cplx> eig = eig_;
  eig.insert(eig.end(), extra.begin(), extra.end());
  return ModelProblem(kind_, std::move(eig), std::nullopt, h_x_);
}

ModelProblem make_spd_interval(double xi_max, int n, double decades) {
  if (n < 2) throw ConfigError("make_spd_interval: n must be >= 2");
  if (!(xi_max > 0.0) || !(decades > 0.0)) throw ConfigError("make_spd_interval: bad interval");
  std::vector<cplx> eig;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    eig.emplace_back(i == n - 1 ? xi_max : xi_max * std::pow(10.0, -decades * (1.0 - t)), 0.0);
  }
  return ModelProblem(ProblemKind::diagonal_spd, std::move(eig));
}

ModelProblem make_skew_interval(double y_max, int n, double decades) {
  if (n < 2) throw ConfigError("make_skew_interval: n must be >= 2");
  std::vector<cplx> eig;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    eig.emplace_back(0.0, i == n - 1 ? y_max : y_max * std::pow(10.0, -decades * (1.0 - t)));
  }
  return ModelProblem(ProblemKind::diagonal_skew, std::move(eig));
}

ModelProblem make_fd_diffusion(int m) {
  if (m < 2) throw ConfigError("make_fd_diffusion: M must be >= 2");
  const double h = 1.0 / (m + 1);
  const double s = 1.0 / (h * h);
  std::vector<cplx> eig;
  for (int j = 1; j <= m; ++j) {
    const double sn = std::sin(j * std::numbers::pi * h / 2.0);
    eig.emplace_back(4.0 * s * sn * sn, 0.0);
  }
  TridiagonalMatrix a{-s, 2.0 * s, -s, m, false};
  return ModelProblem(ProblemKind::fd_diffusion_1d, std::move(eig), a, h);
}

ModelProblem make_skew_advection(int m, double h_x) {
  if (m < 3) throw ConfigError("make_skew_advection: M must be >= 3");
  if (!(h_x > 0.0)) throw ConfigError("make_skew_advection: h_x must be positive");
  std::vector<cplx> eig;
  for (int j = 0; j < m; ++j) {
    double v = std::sin(2.0 * std::numbers::pi * j / m) / h_x;
    // sin(pi) and friends are not exactly zero in floating point
    if (std::abs(v) < 1e-14 / h_x) v = 0.0;
    eig.emplace_back(0.0, v);
  }
  const double s = 1.0 / (2.0 * h_x);
  TridiagonalMatrix a{-s, 0.0, s, m, true};
  return ModelProblem(ProblemKind::fd_advection_1d_periodic, std::move(eig), a, h_x);
}

void write_spectrum_csv(std::ostream& os, const ModelProblem& p) {
  os << "re,im\n";
  for (const cplx& e : p.eigenvalues()) os << format_real(e.real()) << ',' << format_real(e.imag()) << '\n';
}

ModelProblem read_spectrum_csv(std::istream& is) {
  std::string line;
  std::vector<cplx> eig;
  bool header_seen = false;
  while (std::getline(is, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (t == "re,im") continue;
    }
    const auto parts = split(t, ',');
    if (parts.size() != 2) throw ConfigError("spectrum CSV: expected 're,im' rows, got '" + line + "'");
    eig.emplace_back(parse_real(parts[0]), parse_real(parts[1]));
  }
  if (eig.empty()) throw ConfigError("spectrum CSV: no eigenvalues");
  const bool all_imag = std::all_of(eig.begin(), eig.end(), [](cplx e) { return e.real() == 0.0; });
  return ModelProblem(all_imag ? ProblemKind::diagonal_skew : ProblemKind::diagonal_spd, std::move(eig));
}

}  // namespace pintconv
