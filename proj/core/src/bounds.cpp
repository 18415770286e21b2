#include "pintconv/bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pintconv/registry.hpp"
#include "pintconv/text.hpp"

namespace pintconv {

namespace {
constexpr double kGuard = 1e-13;
constexpr double kStabilitySlack = 1e-12;
}  // namespace

PropagatorSpec::PropagatorSpec(std::vector<PropagatorStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw ConfigError("propagator needs at least one step");
  for (const auto& st : steps_)
    if (!(st.step_fraction > 0.0)) throw ConfigError("step fractions must be positive");
}

PropagatorSpec PropagatorSpec::uniform(const ButcherTableau& tab, int k) {
  if (k < 1) throw ConfigError("k must be positive");
  return PropagatorSpec(std::vector<PropagatorStep>(static_cast<std::size_t>(k), {tab, 1.0}));
}

PropagatorSpec PropagatorSpec::mixed(const ButcherTableau& lead, int lead_steps,
                                     const ButcherTableau& tail, int k) {
  if (lead_steps < 0 || lead_steps > k)
    throw ConfigError("lead steps must lie in [0, k]");
  std::vector<PropagatorStep> steps;
  for (int i = 0; i < k; ++i) steps.push_back({i < lead_steps ? lead : tail, 1.0});
  return PropagatorSpec(std::move(steps));
}

double PropagatorSpec::total_fraction() const noexcept {
  double t = 0.0;
  for (const auto& st : steps_) t += st.step_fraction;
  return t;
}

int PropagatorSpec::min_order() const noexcept {
  int p = steps_.front().tableau.order();
  for (const auto& st : steps_) p = std::min(p, st.tableau.order());
  return p;
}

std::string PropagatorSpec::describe() const {
  // run-length encoded, e.g. "sdirk22x2+trapezoidx2"
  std::ostringstream os;
  std::size_t i = 0;
  while (i < steps_.size()) {
    std::size_t j = i;
    while (j < steps_.size() && steps_[j].tableau.name() == steps_[i].tableau.name() &&
           steps_[j].step_fraction == steps_[i].step_fraction)
      ++j;
    if (i) os << '+';
    os << steps_[i].tableau.name();
    if (steps_[i].step_fraction != 1.0) os << '@' << format_real(steps_[i].step_fraction);
    os << 'x' << (j - i);
    i = j;
  }
  return os.str();
}

std::string_view to_string(Relaxation r) { return r == Relaxation::F ? "F" : "FCF"; }

std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::lower_tight: return "lower_tight";
    case BoundKind::upper_tight: return "upper_tight";
    case BoundKind::simple: return "simple";
  }
  return "simple";
}

std::string_view to_string(Axis a) { return a == Axis::real_positive ? "real" : "imag"; }

BoundQuery BoundQuery::make(const ButcherTableau& fine, const ButcherTableau& coarse, int k,
                            Relaxation relaxation) {
  return BoundQuery{PropagatorSpec::uniform(fine, k), coarse, k, relaxation, std::nullopt,
                    BoundKind::simple, 1.0, 1.0, Axis::real_positive};
}

void BoundQuery::validate() const {
  if (k < 2) throw ConfigError("coarsening factor k must be >= 2");
  if (std::abs(fine.total_fraction() - k) > 1e-12 * k)
    throw ConfigError("fine step fractions sum to " + format_real(fine.total_fraction()) +
                      ", expected k = " + std::to_string(k));
  if (nc && *nc < 1) throw ConfigError("N_c must be positive");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  if (theta != 1.0 && relaxation != Relaxation::F)
    throw ConfigError("theta != 1 is only defined for F-relaxation");
  if (!(omega > 0.0 && omega < 2.0)) throw ConfigError("omega must lie in (0, 2)");
}

cplx axis_point(Axis axis, double magnitude) {
  return axis == Axis::real_positive ? cplx(magnitude, 0.0) : cplx(0.0, magnitude);
}

cplx coarse_eigenvalue(const ButcherTableau& coarse, int k, cplx w) {
  return stability_eval(coarse, static_cast<double>(k) * w);
}

cplx fine_interval_eigenvalue(const PropagatorSpec& fine, cplx w) {
  cplx prod(1.0, 0.0);
  for (const auto& st : fine.steps()) prod *= stability_eval(st.tableau, st.step_fraction * w);
  return prod;
}

double pointwise_bound(const BoundQuery& q, cplx w) {
  const cplx lam_k = fine_interval_eigenvalue(q.fine, w);
  const cplx mu = q.theta * coarse_eigenvalue(q.coarse, q.k, w);
  const double m = std::abs(mu);
  if (m > 1.0 + kStabilitySlack)
    throw StabilityError("coarse propagator unstable: theta*|mu| = " + format_real(m));
  const double num = std::abs(mu - lam_k);

  double phi_f;
  if (q.kind == BoundKind::simple || !q.nc) {
    const double den = 1.0 - m;
    if (den < kGuard) {
      if (q.axis == Axis::real_positive && num < kGuard)
        phi_f = 0.0;
      else
        phi_f = kUnbounded;
    } else {
      phi_f = num / den;
    }
  } else {
    const double c = q.kind == BoundKind::lower_tight ? 1.0 : 6.0;
    const double nc = static_cast<double>(*q.nc);
    const double gap = std::max(0.0, 1.0 - m);
    const double den =
        std::sqrt(gap * gap + std::numbers::pi * std::numbers::pi * m / (c * nc * nc));
    phi_f = den > 0.0 ? num / den : (num == 0.0 ? 0.0 : kUnbounded);
  }

  const double weight = std::abs(1.0 - q.omega);
  if (q.relaxation == Relaxation::F) {
    if (phi_f == kUnbounded) return kUnbounded;
    return q.omega == 1.0 ? phi_f : weight + q.omega * phi_f;
  }
  const double fine_mag = std::abs(lam_k);
  if (phi_f == kUnbounded) return kUnbounded;
  const double phi_fcf = fine_mag * phi_f;
  return q.omega == 1.0 ? phi_fcf : weight * fine_mag + q.omega * phi_fcf;
}

KMaximum max_over_k(const ButcherTableau& fine, const ButcherTableau& coarse, Relaxation relaxation,
                    const std::vector<int>& k_set, const SweepOptions& opt) {
  if (k_set.empty()) throw ConfigError("max_over_k needs a nonempty k set");
  KMaximum best;
  for (int k : k_set) {
    const BoundCurve curve = sweep(BoundQuery::make(fine, coarse, k, relaxation), opt);
    if (best.k == 0 || curve.max_phi > best.max_phi) {
      best = {curve.max_phi, k, curve.argmax_w};
      if (curve.unbounded()) break;
    }
  }
  return best;
}

KMaximum max_over_k(std::string_view fine, std::string_view coarse, Relaxation relaxation,
                    const std::vector<int>& k_set, const SweepOptions& opt) {
  return max_over_k(scheme(fine), scheme(coarse), relaxation, k_set, opt);
}

}  // namespace pintconv
