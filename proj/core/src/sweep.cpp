#include <algorithm>
#include <cmath>

#include "pintconv/bounds.hpp"
#include "pintconv/parallel.hpp"

namespace pintconv {

namespace {

constexpr double kBlowup = 1e6;
constexpr double kTieTol = 1e-6;

double guarded(const std::function<double(double)>& phi, double w) {
  try {
    const double v = phi(w);
    return std::isnan(v) ? kUnbounded : v;
  } catch (const StabilityError&) {
    return kUnbounded;
  } catch (const PoleError&) {
    return kUnbounded;
  }
}

struct Point {
  double x;  // log w
  double v;
};

// Golden-section maximization of v(exp(x)) on [a, b]; returns every point evaluated.
std::vector<Point> golden_max(const std::function<double(double)>& phi, double a, double b,
                              double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<Point> pts;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = guarded(phi, std::exp(x1));
  double f2 = guarded(phi, std::exp(x2));
  pts.push_back({x1, f1});
  pts.push_back({x2, f2});
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = guarded(phi, std::exp(x1));
      pts.push_back({x1, f1});
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = guarded(phi, std::exp(x2));
      pts.push_back({x2, f2});
    }
  }
  return pts;
}

}  // namespace

CurveSummary sweep_function(const std::function<double(double)>& phi, const SweepOptions& opt) {
  if (!(opt.w_min > 0.0 && opt.w_min < opt.w_max))
    throw ConfigError("sweep window must satisfy 0 < w_min < w_max");
  if (opt.n_base < 64) throw ConfigError("sweep needs n_base >= 64");

  const auto n = static_cast<std::size_t>(opt.n_base);
  const double x0 = std::log(opt.w_min);
  const double x1 = std::log(opt.w_max);
  std::vector<double> xs(n);
  std::vector<double> ws(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n - 1);
    ws[i] = std::exp(xs[i]);
  }
  ws.front() = opt.w_min;
  ws.back() = opt.w_max;
  std::vector<double> vs(n);
  parallel_for(n, opt.workers, [&](std::size_t i) { vs[i] = guarded(phi, ws[i]); });

  double finite_max = 0.0;
  for (double v : vs)
    if (std::isfinite(v)) finite_max = std::max(finite_max, v);

  // local maxima of the base grid worth refining
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = vs[i];
    if (!std::isfinite(v) || v <= 0.0 || v < 1e-3 * finite_max) continue;
    const double left = i > 0 ? vs[i - 1] : -1.0;
    const double right = i + 1 < n ? vs[i + 1] : -1.0;
    if (v >= left && v >= right && (v > left || v > right)) peaks.push_back(i);
  }
  std::vector<std::vector<Point>> refined(peaks.size());
  const double tol = std::max(opt.refine_tol, 1e-14);
  parallel_for(peaks.size(), opt.workers, [&](std::size_t p) {
    const std::size_t i = peaks[p];
    const double a = xs[i > 0 ? i - 1 : 0];
    const double b = xs[i + 1 < n ? i + 1 : n - 1];
    refined[p] = golden_max(phi, a, b, tol);
  });

  CurveSummary out;
  out.samples.reserve(n + 64 * peaks.size());
  for (std::size_t i = 0; i < n; ++i) out.samples.push_back({ws[i], vs[i]});
  for (const auto& pts : refined)
    for (const auto& p : pts) {
      const double w = std::exp(p.x);
      if (w > opt.w_min && w < opt.w_max) out.samples.push_back({w, p.v});
    }
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const BoundSample& l, const BoundSample& r) { return l.w < r.w; });
  out.samples.erase(std::unique(out.samples.begin(), out.samples.end(),
                                [](const BoundSample& l, const BoundSample& r) { return l.w == r.w; }),
                    out.samples.end());

  // maximum and argmax
  bool blown_up = false;
  double best = 0.0;
  for (const auto& s : out.samples) {
    if (!(s.phi <= kBlowup)) {
      blown_up = true;
      out.argmax_w = s.w;
      break;
    }
    best = std::max(best, s.phi);
  }
  if (blown_up) {
    out.max_phi = kUnbounded;
  } else {
    out.max_phi = best;
    for (const auto& s : out.samples)
      if (s.phi >= best * (1.0 - kTieTol)) {
        out.argmax_w = s.w;
        break;
      }
    // a curve still rising at w_max only matters when the right end holds the maximum
    if (vs[n - 1] > vs[n - 2] && vs[n - 1] >= best * (1.0 - kTieTol)) {
      const double beyond = guarded(phi, 10.0 * opt.w_max);
      if (beyond > vs[n - 1]) {
        out.argmax_w = std::numeric_limits<double>::infinity();
        out.max_phi = std::max(best, beyond);
      }
      if (!std::isfinite(beyond) || beyond / vs[n - 1] > 1.01) {
        out.max_phi = kUnbounded;
        out.argmax_w = std::numeric_limits<double>::infinity();
      }
    }
  }

  // first up-crossing of 1 on the base grid, then bisection in log w
  std::size_t j = 0;
  while (j < n && vs[j] < 1.0) ++j;
  if (j == n) {
    out.threshold = std::numeric_limits<double>::infinity();
  } else if (j == 0) {
    out.threshold = 0.0;
  } else {
    double lo = xs[j - 1];
    double hi = xs[j];
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (guarded(phi, std::exp(mid)) < 1.0)
        lo = mid;
      else
        hi = mid;
    }
    out.threshold = std::exp(0.5 * (lo + hi));
  }
  return out;
}

BoundCurve sweep(const BoundQuery& q, const SweepOptions& opt) {
  q.validate();
  return BoundCurve{
      {sweep_function([&q](double w) { return pointwise_bound_on_axis(q, w); }, opt)}, q};
}

BoundCurve two_iteration_product(const BoundQuery& q1, const BoundQuery& q2,
                                 const SweepOptions& opt) {
  q1.validate();
  q2.validate();
  if (q1.fine.describe() != q2.fine.describe() || q1.coarse.name() != q2.coarse.name() ||
      q1.k != q2.k || q1.axis != q2.axis)
    throw ConfigError("two_iteration_product: queries must share fine, coarse, k and axis");
  return BoundCurve{{sweep_function(
      [&](double w) {
        const double a = pointwise_bound_on_axis(q1, w);
        const double b = pointwise_bound_on_axis(q2, w);
        if (a == kUnbounded || b == kUnbounded) return kUnbounded;
        return a * b;
      },
      opt)}, q1};
}

}  // namespace pintconv
