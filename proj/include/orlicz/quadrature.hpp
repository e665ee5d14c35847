#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace orlicz {

/// Thrown when an integral required to be finite fails the convergence
/// heuristic (partial sums keep growing under panel refinement).
class DivergentIntegralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double rel_tol = 1e-7;
  int max_refinements = 20;   // per-panel trapezoid doublings
  int max_octaves = 200;      // geometric panels toward an endpoint at 0
  double sum_cap = 1e120;     // partial sums beyond this count as divergent
};

/// Adaptive trapezoid on the log-transformed variable over [a, b], 0 < a < b.
/// The per-refinement Richardson difference drives the stopping rule.
/// Returns +inf if the integrand is +inf anywhere it is sampled.
double integrate_log_panel(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opt = {});

struct ImproperResult {
  double value = 0.0;
  bool converged = false;
  bool divergent = false;
  int octaves_used = 0;
};

/// Integral of a nonnegative integrand over (0, b], the endpoint 0 handled by
/// geometrically shrinking panels [b/2^{k+1}, b/2^k]. Divergence is flagged
/// when the per-octave contributions stop decaying (or the sum blows past
/// opt.sum_cap) before max_octaves is exhausted.
ImproperResult integrate_from_zero(const std::function<double(double)>& f,
                                   double b, const QuadratureOptions& opt = {});

}  // namespace orlicz
