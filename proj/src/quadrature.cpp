#include "orlicz/quadrature.hpp"

#include <cmath>
#include <limits>

namespace orlicz {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double integrate_log_panel(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opt) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("integrate_log_panel: need 0 < a < b");
  const double ua = std::log(a), ub = std::log(b);
  // g(u) = f(e^u) e^u so that the integral over [ua, ub] matches.
  auto g = [&](double u) {
    const double t = std::exp(u);
    const double v = f(t);
    return v * t;
  };
  double ga = g(ua), gb = g(ub);
  if (std::isinf(ga) || std::isinf(gb)) return kInf;
  double h = (ub - ua) / 2.0;
  double prev = (ga + gb) * h;
  double mid = g(ua + h);
  if (std::isinf(mid)) return kInf;
  double cur = prev / 2.0 + mid * h;
  std::size_t points = 2;
  for (int k = 2; k <= opt.max_refinements; ++k) {
    prev = cur;
    h /= 2.0;
    points *= 2;
    double sum = 0.0;
    for (std::size_t j = 1; j < points; j += 2) {
      const double v = g(ua + static_cast<double>(j) * h);
      if (std::isinf(v)) return kInf;
      sum += v;
    }
    cur = prev / 2.0 + sum * h;
    const double err = std::abs(cur - prev) / 3.0;  // trapezoid Richardson estimate
    if (k >= 4 && err <= opt.rel_tol * std::max(std::abs(cur), 1e-300)) break;
  }
  return cur;
}

ImproperResult integrate_from_zero(const std::function<double(double)>& f,
                                   double b, const QuadratureOptions& opt) {
  if (!(b > 0.0)) throw std::invalid_argument("integrate_from_zero: need b > 0");
  ImproperResult res;
  double hi = b;
  double prev_panel = -1.0;
  int small_streak = 0;
  for (int k = 0; k < opt.max_octaves; ++k) {
    const double lo = hi / 2.0;
    const double panel = integrate_log_panel(f, lo, hi, opt);
    res.octaves_used = k + 1;
    if (std::isinf(panel) || res.value + panel > opt.sum_cap) {
      res.divergent = true;
      res.value = kInf;
      return res;
    }
    res.value += panel;
    const double scale = std::max(res.value, 1e-300);
    if (panel <= opt.rel_tol * scale) {
      if (++small_streak >= 2) {
        res.converged = true;
        return res;
      }
    } else {
      small_streak = 0;
    }
    // Non-decaying octave contributions signal a divergent endpoint once we
    // are far below the original scale.
    if (k > 24 && prev_panel >= 0.0 && panel >= 0.9 * prev_panel &&
        panel > opt.rel_tol * scale) {
      res.divergent = true;
      return res;
    }
    prev_panel = panel;
    hi = lo;
  }
  // Ran out of octaves: decide by whether contributions were still alive.
  res.divergent = prev_panel > opt.rel_tol * std::max(res.value, 1e-300);
  res.converged = !res.divergent;
  return res;
}

}  // namespace orlicz
