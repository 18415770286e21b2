#include "pintconv/explicit_analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pintconv/text.hpp"

namespace pintconv {

StabilityPolynomial::StabilityPolynomial(std::vector<double> coefficients_in_minus_w)
    : c_(std::move(coefficients_in_minus_w)) {
  if (c_.empty()) c_.push_back(0.0);
}

StabilityPolynomial StabilityPolynomial::from_monomials(const std::vector<double>& m) {
  std::vector<double> c(m.size());
  for (std::size_t l = 0; l < m.size(); ++l) c[l] = (l % 2 ? -1.0 : 1.0) * m[l];
  return StabilityPolynomial(std::move(c));
}

int StabilityPolynomial::degree() const noexcept {
  int d = static_cast<int>(c_.size()) - 1;
  while (d > 0 && c_[static_cast<std::size_t>(d)] == 0.0) --d;
  return d;
}

double StabilityPolynomial::coefficient(int l) const {
  return l >= 0 && static_cast<std::size_t>(l) < c_.size() ? c_[static_cast<std::size_t>(l)] : 0.0;
}

std::vector<double> StabilityPolynomial::monomial_coefficients() const {
  std::vector<double> m(c_.size());
  for (std::size_t l = 0; l < c_.size(); ++l) m[l] = (l % 2 ? -1.0 : 1.0) * c_[l];
  return m;
}

cplx StabilityPolynomial::evaluate(cplx w) const {
  cplx acc(0.0, 0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * (-w) + *it;
  return acc;
}

StabilityPolynomial StabilityPolynomial::scaled(double k) const {
  std::vector<double> c(c_);
  double f = 1.0;
  for (double& v : c) {
    v *= f;
    f *= k;
  }
  return StabilityPolynomial(std::move(c));
}

StabilityPolynomial StabilityPolynomial::operator*(const StabilityPolynomial& o) const {
  std::vector<double> c(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  return StabilityPolynomial(std::move(c));
}

StabilityPolynomial StabilityPolynomial::operator-(const StabilityPolynomial& o) const {
  std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] -= o.c_[i];
  return StabilityPolynomial(std::move(c));
}

StabilityPolynomial stability_polynomial(const ButcherTableau& tab) {
  if (!tab.is_explicit())
    throw std::invalid_argument(tab.name() + " is implicit; no stability polynomial");
  const int s = tab.stages();
  // lambda(w) = 1 + sum_l (-w)^l b^T A^{l-1} 1
  std::vector<double> c(static_cast<std::size_t>(s + 1), 0.0);
  c[0] = 1.0;
  std::vector<double> v(static_cast<std::size_t>(s), 1.0);
  for (int l = 1; l <= s; ++l) {
    double dot = 0.0;
    for (int j = 0; j < s; ++j) dot += tab.b()[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
    c[static_cast<std::size_t>(l)] = dot;
    std::vector<double> next(static_cast<std::size_t>(s), 0.0);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < i; ++j) next[static_cast<std::size_t>(i)] += tab.a(i, j) * v[static_cast<std::size_t>(j)];
    v = std::move(next);
  }
  return StabilityPolynomial(std::move(c));
}

StabilityPolynomial phi_k_polynomial(const ButcherTableau& tab, int k) {
  if (k < 1) throw std::invalid_argument("phi_k_polynomial: k must be positive");
  const StabilityPolynomial base = stability_polynomial(tab);
  StabilityPolynomial acc = base;
  for (int i = 1; i < k; ++i) acc = acc * base;
  return acc;
}

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

void require_truncated_exponential(const ButcherTableau& tab, const StabilityPolynomial& p) {
  const int s = tab.stages();
  double fact = 1.0;
  for (int l = 0; l <= s; ++l) {
    if (l > 0) fact *= l;
    if (!close_rel(p.coefficient(l), 1.0 / fact, 1e-13))
      throw NotTruncatedExponential(tab.name() + ": stability polynomial is not the truncated exponential");
  }
}

}  // namespace

bool check_taylor_optimality(const ButcherTableau& tab, int k) {
  const StabilityPolynomial lam = stability_polynomial(tab);
  require_truncated_exponential(tab, lam);
  const StabilityPolynomial coarse = lam.scaled(k);
  const StabilityPolynomial fine = phi_k_polynomial(tab, k);
  for (int l = 0; l <= tab.stages(); ++l)
    if (!close_rel(coarse.coefficient(l), fine.coefficient(l), 1e-13)) return false;
  return true;
}

StabilityPolynomial singularity_polynomial(const ButcherTableau& tab, int k) {
  return stability_polynomial(tab).scaled(k) - phi_k_polynomial(tab, k);
}

std::vector<cplx> polynomial_roots(const std::vector<double>& m) {
  int deg = static_cast<int>(m.size()) - 1;
  while (deg > 0 && m[static_cast<std::size_t>(deg)] == 0.0) --deg;
  if (deg < 1) return {};
  // substitute w = sigma z so the constant and leading coefficients match in
  // magnitude; the companion matrix of the raw coefficients is badly scaled
  int low = 0;
  while (m[static_cast<std::size_t>(low)] == 0.0) ++low;
  const double sigma = std::pow(std::abs(m[static_cast<std::size_t>(low)] / m[static_cast<std::size_t>(deg)]),
                                1.0 / (deg - low));
  std::vector<double> z(m.begin(), m.begin() + deg + 1);
  for (int i = 0; i <= deg; ++i) z[static_cast<std::size_t>(i)] *= std::pow(sigma, i);
  const double lead = z[static_cast<std::size_t>(deg)];
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -z[static_cast<std::size_t>(i)] / lead;
  const Eigen::VectorXcd ev = comp.eigenvalues();
  std::vector<cplx> out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(ev(i) * sigma);
  return out;
}

std::vector<PolynomialRoot> singularity_roots(const ButcherTableau& tab, int k, double w_max) {
  if (!tab.is_explicit()) throw ConfigError(tab.name() + " is not explicit");
  if (tab.order() != tab.stages() || tab.stages() > 4)
    throw ConfigError(tab.name() + ": need order == stages <= 4");
  const StabilityPolynomial p = singularity_polynomial(tab, k);
  std::vector<double> m = p.monomial_coefficients();

  // The low-order coefficients cancel exactly in theory; snap rounding residue
  // to zero so the root at the origin is not smeared into a small cluster.
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  int mult = 0;
  while (mult + 1 < static_cast<int>(m.size()) &&
         std::abs(m[static_cast<std::size_t>(mult)]) <= 1e-13 * scale)
    ++mult;
  std::vector<double> deflated(m.begin() + mult, m.end());

  auto lam = [&](cplx w) { return stability_eval(tab, w); };
  auto flag = [&](PolynomialRoot& r) {
    const cplx w = r.value;
    const double sz = std::max(1.0, std::abs(w));
    const bool stable = std::abs(lam(w)) < 1.0 && std::abs(lam(static_cast<double>(k) * w)) < 1.0;
    r.in_stable_region = std::abs(w.imag()) <= 1e-9 * sz && w.real() > 0.0 && stable;
    r.on_imaginary_stable = std::abs(w.real()) <= 1e-9 * sz && std::abs(w.imag()) > 0.0 && stable;
  };

  std::vector<PolynomialRoot> out;
  out.push_back({cplx(0.0, 0.0), mult, false, false});
  for (cplx r : polynomial_roots(deflated)) {
    // Newton polish on the full polynomial while the residual keeps dropping
    auto eval = [&m](cplx x, cplx& der) {
      cplx val(0.0, 0.0);
      der = cplx(0.0, 0.0);
      for (auto it = m.rbegin(); it != m.rend(); ++it) {
        der = der * x + val;
        val = val * x + *it;
      }
      return val;
    };
    cplx der;
    cplx val = eval(r, der);
    for (int it = 0; it < 8 && std::abs(der) > 0.0; ++it) {
      const cplx next = r - val / der;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      cplx next_der;
      const cplx next_val = eval(next, next_der);
      if (!(std::abs(next_val) < std::abs(val))) break;
      r = next;
      val = next_val;
      der = next_der;
    }
    if (std::abs(r) > w_max) continue;
    PolynomialRoot root{r, 1, false, false};
    flag(root);
    out.push_back(root);
  }
  std::sort(out.begin() + 1, out.end(), [](const PolynomialRoot& a, const PolynomialRoot& b) {
    if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) < std::abs(b.value);
    return a.value.imag() < b.value.imag();
  });
  return out;
}

void write_roots_csv(std::ostream& os, const std::vector<PolynomialRoot>& roots) {
  os << "re,im,in_stable_region\n";
  for (const auto& r : roots)
    os << format_real(r.value.real()) << ',' << format_real(r.value.imag()) << ','
       << (r.in_stable_region ? "true" : "false") << '\n';
}

}  // namespace pintconv
