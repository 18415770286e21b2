#include "pintconv/butcher.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "pintconv/text.hpp"

namespace pintconv {

OrderMismatch::OrderMismatch(std::string scheme, int declared, int measured)
    : std::runtime_error("scheme '" + scheme + "' declares order " +
                         std::to_string(declared) + " but measures " +
                         std::to_string(measured)),
      scheme_(std::move(scheme)),
      declared_(declared),
      measured_(measured) {}

std::string_view to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::a_stable: return "A_stable";
    case StabilityClass::l_stable: return "L_stable";
    case StabilityClass::conditionally_stable: return "conditionally_stable";
  }
  return "conditionally_stable";
}

StabilityClass parse_stability_class(std::string_view text) {
  if (text == "A_stable") return StabilityClass::a_stable;
  if (text == "L_stable") return StabilityClass::l_stable;
  if (text == "conditionally_stable") return StabilityClass::conditionally_stable;
  throw ConfigError("unknown stability class '" + std::string(text) + "'");
}

ButcherTableau::ButcherTableau(std::string name, std::vector<double> a_row_major,
                               std::vector<double> b, std::vector<double> c,
                               int order, StabilityClass declared_class)
    : name_(std::move(name)),
      s_(static_cast<int>(b.size())),
      a_(std::move(a_row_major)),
      b_(std::move(b)),
      c_(std::move(c)),
      order_(order),
      class_(declared_class) {
  if (s_ < 1) throw std::invalid_argument(name_ + ": need at least one stage");
  const auto s = static_cast<std::size_t>(s_);
  if (a_.size() != s * s || c_.size() != s)
    throw std::invalid_argument(name_ + ": inconsistent tableau dimensions");
  if (order_ < 1) throw std::invalid_argument(name_ + ": order must be >= 1");
  for (int i = 0; i < s_; ++i) {
    double row = 0.0;
    for (int j = 0; j < s_; ++j) row += a(i, j);
    if (std::abs(row - c_[static_cast<std::size_t>(i)]) >
        1e-12 * std::max(1.0, std::abs(row)))
      throw std::invalid_argument(name_ + ": c_i != sum_j A_ij in row " +
                                  std::to_string(i));
  }
  explicit_ = true;
  lower_triangular_ = true;
  for (int i = 0; i < s_; ++i)
    for (int j = i; j < s_; ++j) {
      if (a(i, j) != 0.0) {
        explicit_ = false;
        if (j > i) lower_triangular_ = false;
      }
    }
  stiffly_accurate_ = true;
  for (int j = 0; j < s_; ++j)
    if (std::abs(a(s_ - 1, j) - b_[static_cast<std::size_t>(j)]) > 1e-13)
      stiffly_accurate_ = false;
}

ButcherTableau ButcherTableau::renamed(std::string name) const {
  ButcherTableau copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

namespace {

using std::abs;

// x = (I + wA)^{-1} 1 by Gaussian elimination with partial pivoting.
// T is std::complex<double> or a multiprecision real.
template <class T>
std::vector<T> solve_shifted_ones(const ButcherTableau& tab, const T& w) {
  const int s = tab.stages();
  if (tab.is_diagonally_implicit()) {
    // forward substitution; pivoting would mix rows of very different scale for large |w|
    std::vector<T> x(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
      T acc(1.0);
      for (int j = 0; j < i; ++j) acc -= w * T(tab.a(i, j)) * x[static_cast<std::size_t>(j)];
      const T d = T(1.0) + w * T(tab.a(i, i));
      if (!(abs(d) >= 1e-300))
        throw PoleError(tab.name() + ": I + wA is singular (pole of the stability function)");
      x[static_cast<std::size_t>(i)] = acc / d;
    }
    return x;
  }
  std::vector<T> m(static_cast<std::size_t>(s * (s + 1)));
  auto at = [&](int i, int j) -> T& { return m[static_cast<std::size_t>(i * (s + 1) + j)]; };
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) at(i, j) = w * T(tab.a(i, j)) + T(i == j ? 1.0 : 0.0);
    at(i, s) = T(1.0);
  }
  for (int col = 0; col < s; ++col) {
    int piv = col;
    for (int r = col + 1; r < s; ++r)
      if (abs(at(r, col)) > abs(at(piv, col))) piv = r;
    if (!(abs(at(piv, col)) >= 1e-300))
      throw PoleError(tab.name() + ": I + wA is singular (pole of the stability function)");
    if (piv != col)
      for (int j = 0; j <= s; ++j) std::swap(at(col, j), at(piv, j));
    for (int r = col + 1; r < s; ++r) {
      const T f = at(r, col) / at(col, col);
      if (f == T(0.0)) continue;
      for (int j = col; j <= s; ++j) at(r, j) -= f * at(col, j);
    }
  }
  std::vector<T> x(static_cast<std::size_t>(s));
  for (int i = s - 1; i >= 0; --i) {
    T acc = at(i, s);
    for (int j = i + 1; j < s; ++j) acc -= at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = acc / at(i, i);
  }
  return x;
}

template <class T>
T stability_eval_t(const ButcherTableau& tab, const T& w) {
  if (w == T(0.0)) return T(1.0);
  const auto x = solve_shifted_ones(tab, w);
  // with b equal to the last row of A the last stage already is the step result,
  // and reading it off avoids cancellation in 1 - w b^T x at large |w|
  if (tab.stiffly_accurate()) return x.back();
  T dot(0.0);
  for (int j = 0; j < tab.stages(); ++j)
    dot += T(tab.b()[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
  return T(1.0) - w * dot;
}

using real50 = boost::multiprecision::cpp_bin_float_50;

}  // namespace

cplx stability_eval(const ButcherTableau& tab, cplx w) {
  return stability_eval_t<cplx>(tab, w);
}

double stability_defect_extended(const ButcherTableau& tab, double w) {
  const real50 wx(w);
  const real50 lam = stability_eval_t<real50>(tab, wx);
  return static_cast<double>(abs(lam - exp(-wx)));
}

int measure_order(const ButcherTableau& tab) {
  // least-squares slope over a log-spaced set in [1e-3, 1e-2]
  constexpr int n = 9;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -3.0 + static_cast<double>(i) / (n - 1);
    const double err = stability_defect_extended(tab, std::pow(10.0, x));
    if (err == 0.0) return 99;  // matches exp(-w) to 50 digits
    const double y = std::log10(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return static_cast<int>(std::floor(slope - 0.9));
}

int verify_order(const ButcherTableau& tab) {
  const int p = measure_order(tab);
  if (p != tab.order()) throw OrderMismatch(tab.name(), tab.order(), p);
  return p;
}

StabilityClass classify_stability(const ButcherTableau& tab) {
  if (tab.is_explicit()) return StabilityClass::conditionally_stable;
  constexpr double tol = 1.0 + 1e-12;

  // Poles of lambda are at w = -1/alpha, alpha an eigenvalue of A.
  const int s = tab.stages();
  Eigen::MatrixXd a(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) a(i, j) = tab.a(i, j);
  const Eigen::VectorXcd eig = a.eigenvalues();
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const cplx alpha = eig(i);
    if (std::abs(alpha) < 1e-14) continue;  // pole at infinity only
    if ((-1.0 / alpha).real() >= -1e-14) return StabilityClass::conditionally_stable;
  }

  try {
    if (std::abs(stability_eval(tab, cplx(0.0, 0.0))) > tol)
      return StabilityClass::conditionally_stable;
    constexpr int n_axis = 2401;
    for (int i = 0; i < n_axis; ++i) {
      const double y = std::pow(10.0, -6.0 + 12.0 * i / (n_axis - 1));
      for (double sign : {1.0, -1.0})
        if (std::abs(stability_eval(tab, cplx(0.0, sign * y))) > tol)
          return StabilityClass::conditionally_stable;
    }
    constexpr int n_arc = 129;
    for (double radius : {1e3, 1e6, 1e9}) {
      for (int i = 0; i < n_arc; ++i) {
        const double t = -std::numbers::pi / 2 + std::numbers::pi * i / (n_arc - 1);
        if (std::abs(stability_eval(tab, std::polar(radius, t))) > tol)
          return StabilityClass::conditionally_stable;
      }
    }
    if (std::abs(stability_eval(tab, cplx(1e12, 0.0))) < 1e-6)
      return StabilityClass::l_stable;
  } catch (const PoleError&) {
    return StabilityClass::conditionally_stable;
  }
  return StabilityClass::a_stable;
}

std::string to_text(const ButcherTableau& tab) {
  std::ostringstream os;
  auto list = [&os](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << format_real(v[i]);
    os << '\n';
  };
  os << "name = " << tab.name() << '\n'
     << "s = " << tab.stages() << '\n'
     << "order = " << tab.order() << '\n'
     << "class = " << to_string(tab.stability_class()) << '\n'
     << "A = ";
  list(tab.a_row_major());
  os << "b = ";
  list(tab.b());
  os << "c = ";
  list(tab.c());
  return os.str();
}

ButcherTableau parse_tableau(std::string_view text) {
  const auto kv = parse_key_values(text, {"name", "s", "order", "class", "A", "b", "c"});
  for (const char* key : {"name", "s", "order", "A", "b"})
    if (!kv.contains(key)) throw ConfigError(std::string("tableau: missing key '") + key + "'");
  const int s = parse_int(kv.at("s"));
  std::vector<double> a = parse_real_list(kv.at("A"), ' ');
  std::vector<double> b = parse_real_list(kv.at("b"), ' ');
  if (s < 1 || a.size() != static_cast<std::size_t>(s * s) ||
      b.size() != static_cast<std::size_t>(s))
    throw ConfigError("tableau: dimensions do not match s = " + std::to_string(s));
  std::vector<double> c;
  if (kv.contains("c")) {
    c = parse_real_list(kv.at("c"), ' ');
  } else {
    for (int i = 0; i < s; ++i) {
      double row = 0;
      for (int j = 0; j < s; ++j) row += a[static_cast<std::size_t>(i * s + j)];
      c.push_back(row);
    }
  }
  const StabilityClass cls = kv.contains("class") ? parse_stability_class(kv.at("class"))
                                                  : StabilityClass::conditionally_stable;
  try {
    return ButcherTableau(kv.at("name"), std::move(a), std::move(b), std::move(c),
                          parse_int(kv.at("order")), cls);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace pintconv
