#pragma once

#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orlicz {

class NonMonotoneInverseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Piecewise tabulation of a nondecreasing function on (0, inf) with value 0
/// at 0. Interpolation is linear in log-log coordinates (plain linear when a
/// segment starts at 0); both ends extrapolate the adjacent power law. When
/// x_end is set the value is +inf for arguments beyond it.
struct MonotoneTable {
  std::vector<double> x;  // ascending, > 0
  std::vector<double> y;  // nondecreasing, finite, >= 0
  std::optional<double> x_end;

  double value(double q) const;
  /// Generalized inverse inf{q : value(q) > s}; plateaus resolve to their
  /// right endpoint, inf of the empty set is +inf.
  double inverse(double s) const;

  void validate() const;  // throws std::invalid_argument on bad shape
};

/// Log-spaced abscissa grid used by the tabulating constructions.
struct TableGrid {
  double lo = 1e-8;
  double hi = 1e8;
  int per_decade = 64;
  std::vector<double> abscissae() const;
};

enum class YoungKind {
  power,             // r^p, p >= 1
  scaled_power,      // r^p / p, p > 1
  exp_minus_linear,  // e^r - r - 1
  linfty_step,       // 0 on [0,1], +inf beyond
  zygmund,           // (1+r) log(1+r) - r
  tabulated,
};

/// Convex, left-continuous Phi with Phi(0) = 0 and Phi(inf) = inf. Immutable
/// value type; copies share the underlying table.
class YoungFunction {
 public:
  static YoungFunction power(double p);
  static YoungFunction scaled_power(double p);
  static YoungFunction exp_minus_linear();
  static YoungFunction linfty_step();
  static YoungFunction zygmund();
  static YoungFunction tabulated(MonotoneTable table);
  /// Two-column CSV rows "r,value"; "inf" is accepted as a value token.
  static YoungFunction from_csv(std::istream& in);

  double operator()(double r) const;
  double log_value(double r) const;  // ln Phi(r); -inf when 0, +inf when inf
  double inverse(double s) const;    // generalized inverse, inf empty = +inf

  YoungKind kind() const;
  double exponent() const;  // p for the power kinds
  const MonotoneTable* table() const;
  std::optional<double> domain_end() const;
  std::string describe() const;

 private:
  struct Impl;
  explicit YoungFunction(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// ---- constructions ----

struct ConjugateOptions {
  TableGrid out_grid{};                     // abscissae of the result
  TableGrid search_grid{1e-12, 1e300, 64};  // coarse maximizer candidates
  bool monotone_speedup = true;             // false: full scan per abscissa
  int refine_iters = 80;                    // ternary refinement steps
};

/// Legendre transform sup_s (r s - Phi(s)). Closed forms are returned for the
/// known conjugate pairs; anything else goes through the tabulating transform.
YoungFunction conjugate(const YoungFunction& phi);

/// The tabulating transform itself, independent of the closed forms; tests
/// use it (and its full-scan mode) as the oracle for the closed-form path.
YoungFunction conjugate_numeric(const YoungFunction& phi,
                                const ConjugateOptions& opt = {});

struct GrowthVerdict {
  bool holds = false;
  double witness_k = 0.0;  // valid when holds is true
  double searched_up_to = 0.0;
};

struct YoungIndices {
  double a_index = 0.0;  // inf over t of the log-log slope of Phi
  double b_index = 0.0;  // sup of the same
  std::string grid;      // description of the sample grid used
};

struct Classification {
  GrowthVerdict delta2;   // Phi(2r) <= k Phi(r) on the samples
  GrowthVerdict nabla2;   // 2k Phi(r) <= Phi(kr) on the samples
  std::optional<YoungIndices> indices;  // absent when the slope degenerates
};

struct ClassifyOptions {
  double sample_lo = 1e-8;
  double sample_hi = 1e8;
  int per_decade = 16;
  double k_max = 1e4;
};

Classification classify(const YoungFunction& phi, const ClassifyOptions& opt = {});

struct DominationVerdict {
  bool holds = false;
  double constant = 0.0;  // smallest witnessing c found
  double c_max = 0.0;
};

struct DominationOptions {
  double s_lo = 1e-8;
  double s_hi = 1e8;
  int s_per_decade = 16;
  double c_min = 1e-6;
  int c_per_decade = 16;
  double slack = 1e-9;  // relative slack on the comparison
};

/// Does big dominate small globally: small(s) <= big(c s) for all sampled s?
DominationVerdict dominates_globally(const YoungFunction& big,
                                     const YoungFunction& small, double c_max,
                                     const DominationOptions& opt = {});

/// Young function whose generalized inverse is r -> r^{alpha/n} psi^{-1}(r).
/// alpha = 0 returns psi unchanged.
YoungFunction compose_inverse_power(const YoungFunction& psi, double alpha,
                                    int n, const TableGrid& grid = {});

enum class AuxKind { psi_p, phi_p };

/// Integral-transform companions of a Young function at index p in (1, inf]:
/// psi_p runs the inner integral on the function itself and conjugates the
/// result; phi_p runs it on the conjugate and returns the outer integral
/// directly. Throws DivergentIntegralError when an inner integral diverges.
YoungFunction build_auxiliary(const YoungFunction& f, double p, AuxKind which,
                              const TableGrid& grid = {});

namespace detail {
/// Turn strictly increasing samples g_i at abscissae x_i into a table for the
/// inverse map g -> x. Throws NonMonotoneInverseError when g fails to
/// increase.
MonotoneTable invert_monotone_samples(const std::vector<double>& x,
                                      const std::vector<double>& g);
/// Monotone bisection for f(r) = s, f continuous increasing; the bracket is
/// grown geometrically from an initial guess.
double solve_increasing(const std::function<double(double)>& f, double s,
                        double guess, double rel_tol = 1e-12);
}  // namespace detail

}  // namespace orlicz
