#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pintconv/butcher.hpp"

namespace pintconv {

/// Sentinel for an unbounded bound value / unbounded curve maximum.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct PropagatorStep {
  ButcherTableau tableau;
  double step_fraction = 1.0;
};

/// The fine propagator across one coarse interval: an ordered list of steps
/// whose fractions (in units of the fine step h_t) add up to k.
class PropagatorSpec {
 public:
  explicit PropagatorSpec(std::vector<PropagatorStep> steps);

  static PropagatorSpec uniform(const ButcherTableau& tab, int k);
  /// `lead_steps` steps of `lead`, then k - lead_steps steps of `tail`.
  static PropagatorSpec mixed(const ButcherTableau& lead, int lead_steps,
                              const ButcherTableau& tail, int k);

  const std::vector<PropagatorStep>& steps() const noexcept { return steps_; }
  double total_fraction() const noexcept;
  int min_order() const noexcept;
  std::string describe() const;

 private:
  std::vector<PropagatorStep> steps_;
};

enum class Relaxation { F, FCF };
enum class BoundKind { lower_tight, upper_tight, simple };
enum class Axis { real_positive, imaginary };

std::string_view to_string(Relaxation r);
std::string_view to_string(BoundKind k);
std::string_view to_string(Axis a);

struct BoundQuery {
  PropagatorSpec fine;
  ButcherTableau coarse;
  int k = 2;
  Relaxation relaxation = Relaxation::F;
  std::optional<long> nc;  ///< number of coarse steps; empty means infinity
  BoundKind kind = BoundKind::simple;
  double theta = 1.0;
  double omega = 1.0;
  Axis axis = Axis::real_positive;

  /// Uniform fine propagator, simple bound, real axis.
  static BoundQuery make(const ButcherTableau& fine, const ButcherTableau& coarse, int k,
                         Relaxation relaxation);
  /// Throws ConfigError on inconsistent fields.
  void validate() const;
};

/// w on the chosen axis for a nonnegative magnitude.
cplx axis_point(Axis axis, double magnitude);

/// mu(w) = lambda_coarse(k w).
cplx coarse_eigenvalue(const ButcherTableau& coarse, int k, cplx w);

/// Product of per-step eigenvalues lambda_j(fraction_j w).
cplx fine_interval_eigenvalue(const PropagatorSpec& fine, cplx w);

/// The selected bound at w; kUnbounded for the guarded blow-up case.
/// Throws StabilityError when theta |mu(w)| > 1, PoleError at poles.
double pointwise_bound(const BoundQuery& q, cplx w);
inline double pointwise_bound_on_axis(const BoundQuery& q, double magnitude) {
  return pointwise_bound(q, axis_point(q.axis, magnitude));
}

struct SweepOptions {
  double w_min = 1e-8;
  double w_max = 1e8;
  int n_base = 512;
  /// relative width at which golden-section refinement stops
  double refine_tol = 1e-6;
  unsigned workers = 0;  ///< 0 picks hardware concurrency
};

struct BoundSample {
  double w;
  double phi;
};

struct CurveSummary {
  std::vector<BoundSample> samples;  ///< strictly increasing in w
  double max_phi = 0.0;              ///< kUnbounded when unbounded
  double argmax_w = 0.0;             ///< infinity when the max is approached as w -> inf
  double threshold = 0.0;            ///< first up-crossing of 1; infinity if none

  bool unbounded() const noexcept { return max_phi == kUnbounded; }
};

struct BoundCurve : CurveSummary {
  BoundQuery query;
};

/// Sweeps any magnitude -> phi function with the sampling and summary rules
/// used for bound curves. StabilityError/PoleError at a sample count as unbounded.
CurveSummary sweep_function(const std::function<double(double)>& phi, const SweepOptions& opt);

BoundCurve sweep(const BoundQuery& q, const SweepOptions& opt = {});

/// Pointwise product of two bounds (theta-Parareal iteration pairs).
BoundCurve two_iteration_product(const BoundQuery& q1, const BoundQuery& q2,
                                 const SweepOptions& opt = {});

struct KMaximum {
  double max_phi = 0.0;
  int k = 0;
  double argmax_w = 0.0;
};

/// Max over k of the simple real-axis bound for uniform fine/coarse schemes.
KMaximum max_over_k(const ButcherTableau& fine, const ButcherTableau& coarse, Relaxation relaxation,
                    const std::vector<int>& k_set, const SweepOptions& opt = {});
KMaximum max_over_k(std::string_view fine, std::string_view coarse, Relaxation relaxation,
                    const std::vector<int>& k_set, const SweepOptions& opt = {});

}  // namespace pintconv
