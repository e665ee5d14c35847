#include "orlicz/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlicz/quadrature.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_interp(double x0, double y0, double x1, double y1, double q) {
  // Segment interpolation: log-log when both values are positive, linear when
  // the lower value is zero (left end of a rising segment).
  if (y0 > 0.0) {
    const double m = std::log(y1 / y0) / std::log(x1 / x0);
    return y0 * std::exp(m * std::log(q / x0));
  }
  return y0 + (y1 - y0) * (q - x0) / (x1 - x0);
}

}  // namespace

// ---------------------------------------------------------------------------
// MonotoneTable

void MonotoneTable::validate() const {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("table needs at least two samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i]))
      throw std::invalid_argument("table abscissae must be positive finite");
    if (!(y[i] >= 0.0) || !std::isfinite(y[i]))
      throw std::invalid_argument("table values must be nonnegative finite");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw std::invalid_argument("table abscissae must be strictly increasing");
    if (i > 0 && y[i] < y[i - 1] * (1.0 - 1e-12))
      throw std::invalid_argument("table values must be nondecreasing");
  }
  if (!x_end && !(y.back() > y.front()))
    throw std::invalid_argument("table without a domain end must grow");
}

double MonotoneTable::value(double q) const {
  if (!(q > 0.0)) return 0.0;
  if (x_end && q > *x_end * (1.0 + 1e-15)) return kInf;
  const std::size_t n = x.size();
  if (q <= x.front()) {
    if (y.front() <= 0.0) return 0.0;
    if (n >= 2 && y[1] > y[0]) {
      const double m = std::log(y[1] / y[0]) / std::log(x[1] / x[0]);
      if (m > 0.0) return y[0] * std::exp(m * std::log(q / x[0]));
    }
    return y.front();
  }
  if (q >= x.back()) {
    if (x_end) return y.back();
    if (y[n - 1] > y[n - 2]) {
      if (y[n - 2] > 0.0) {
        const double m = std::log(y[n - 1] / y[n - 2]) / std::log(x[n - 1] / x[n - 2]);
        return y.back() * std::exp(m * std::log(q / x.back()));
      }
      return y[n - 2] + (y[n - 1] - y[n - 2]) * (q - x[n - 2]) / (x[n - 1] - x[n - 2]);
    }
    return y.back();
  }
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  return log_interp(x[j - 1], y[j - 1], x[j], y[j], q);
}

double MonotoneTable::inverse(double s) const {
  if (std::isnan(s)) return s;
  if (std::isinf(s)) return kInf;
  if (s < 0.0) s = 0.0;
  const std::size_t n = x.size();
  if (s >= y.back()) {
    if (x_end) return *x_end;
    // Upper extension; a (near-)flat tail means the table never crosses s,
    // i.e. the inverse is +inf.
    if (y[n - 1] > y[n - 2]) {
      if (y[n - 2] > 0.0) {
        const double m = std::log(y[n - 1] / y[n - 2]) / std::log(x[n - 1] / x[n - 2]);
        if (m > 1e-6) return x.back() * std::exp(std::log(s / y.back()) / m);
        return kInf;
      }
      return x[n - 2] + (s - y[n - 2]) * (x[n - 1] - x[n - 2]) / (y[n - 1] - y[n - 2]);
    }
    return kInf;
  }
  const auto it = std::upper_bound(y.begin(), y.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - y.begin());
  if (j == 0) {
    // s below every table value: extend the first rising segment downward.
    if (s <= 0.0) return 0.0;
    if (n >= 2 && y[0] > 0.0 && y[1] > y[0]) {
      const double m = std::log(y[1] / y[0]) / std::log(x[1] / x[0]);
      if (m > 0.0) return x[0] * std::exp(std::log(s / y[0]) / m);
    }
    return 0.0;
  }
  const double x0 = x[j - 1], y0 = y[j - 1], x1 = x[j], y1 = y[j];
  if (y0 <= 0.0) return x0 + (s - y0) * (x1 - x0) / (y1 - y0);
  if (s <= y0) return x0;  // plateau: right endpoint of the flat stretch
  const double m = std::log(y1 / y0) / std::log(x1 / x0);
  return x0 * std::exp(std::log(s / y0) / m);
}

std::vector<double> TableGrid::abscissae() const {
  const double e0 = std::log10(lo), e1 = std::log10(hi);
  const int count = std::max(1, static_cast<int>(std::lround((e1 - e0) * per_decade)));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count) + 1);
  for (int j = 0; j <= count; ++j)
    out.push_back(std::pow(10.0, e0 + (e1 - e0) * j / count));
  return out;
}

// ---------------------------------------------------------------------------
// YoungFunction

struct YoungFunction::Impl {
  YoungKind kind;
  double p = 0.0;
  std::optional<MonotoneTable> tab;
};

YoungFunction::YoungFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

YoungFunction YoungFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power: need p >= 1");
  return YoungFunction(std::make_shared<Impl>(Impl{YoungKind::power, p, {}}));
}

YoungFunction YoungFunction::scaled_power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("scaled_power: need p > 1");
  return YoungFunction(std::make_shared<Impl>(Impl{YoungKind::scaled_power, p, {}}));
}

YoungFunction YoungFunction::exp_minus_linear() {
  return YoungFunction(std::make_shared<Impl>(Impl{YoungKind::exp_minus_linear, 0, {}}));
}

YoungFunction YoungFunction::linfty_step() {
  return YoungFunction(std::make_shared<Impl>(Impl{YoungKind::linfty_step, 0, {}}));
}

YoungFunction YoungFunction::zygmund() {
  return YoungFunction(std::make_shared<Impl>(Impl{YoungKind::zygmund, 0, {}}));
}

YoungFunction YoungFunction::tabulated(MonotoneTable table) {
  table.validate();
  // Discrete convexity: chord slopes must not decrease (small relative slack
  // absorbs quadrature noise in internally built tables).
  double prev_slope = -kInf;
  for (std::size_t i = 0; i + 1 < table.x.size(); ++i) {
    const double slope = (table.y[i + 1] - table.y[i]) / (table.x[i + 1] - table.x[i]);
    const double slack = 1e-6 * std::max(std::abs(slope), std::abs(prev_slope)) + 1e-300;
    if (slope < prev_slope - slack)
      throw std::invalid_argument("tabulated function is not convex");
    prev_slope = std::max(prev_slope, slope);
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = YoungKind::tabulated;
  impl->tab = std::move(table);
  return YoungFunction(std::move(impl));
}

YoungFunction YoungFunction::from_csv(std::istream& in) {
  MonotoneTable t;
  std::string line;
  bool saw_inf = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n,") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double r;
    std::string value_token;
    if (!(row >> r >> value_token)) throw std::invalid_argument("bad csv row: " + line);
    double v;
    if (value_token == "inf" || value_token == "Inf" || value_token == "INF" ||
        value_token == "+inf") {
      v = kInf;
    } else {
      v = std::stod(value_token);
    }
    if (std::isinf(v)) {
      if (t.x.empty()) throw std::invalid_argument("csv starts with an infinite value");
      if (!saw_inf) t.x_end = t.x.back();
      saw_inf = true;
      continue;
    }
    if (saw_inf) throw std::invalid_argument("finite value after an infinite one");
    if (!t.x.empty() && !(r > t.x.back()))
      throw std::invalid_argument("csv abscissae must be strictly increasing");
    t.x.push_back(r);
    t.y.push_back(v);
  }
  return tabulated(std::move(t));
}

YoungKind YoungFunction::kind() const { return impl_->kind; }
double YoungFunction::exponent() const { return impl_->p; }
const MonotoneTable* YoungFunction::table() const {
  return impl_->tab ? &*impl_->tab : nullptr;
}

std::optional<double> YoungFunction::domain_end() const {
  if (impl_->kind == YoungKind::linfty_step) return 1.0;
  if (impl_->tab) return impl_->tab->x_end;
  return std::nullopt;
}

double YoungFunction::operator()(double r) const {
  if (std::isnan(r)) return r;
  if (r < 0.0) throw std::domain_error("Young function argument must be >= 0");
  if (r == 0.0) return 0.0;
  switch (impl_->kind) {
    case YoungKind::power:
      return impl_->p == 1.0 ? r : std::pow(r, impl_->p);
    case YoungKind::scaled_power:
      return std::pow(r, impl_->p) / impl_->p;
    case YoungKind::exp_minus_linear:
      if (r < 1e-4) return 0.5 * r * r * (1.0 + r / 3.0 + r * r / 12.0 + r * r * r / 60.0);
      return std::expm1(r) - r;
    case YoungKind::linfty_step:
      return r <= 1.0 ? 0.0 : kInf;
    case YoungKind::zygmund:
      if (r < 1e-4) return 0.5 * r * r * (1.0 - r / 3.0 + r * r / 6.0 - r * r * r / 10.0);
      return (1.0 + r) * std::log1p(r) - r;
    case YoungKind::tabulated:
      return impl_->tab->value(r);
  }
  return 0.0;
}

double YoungFunction::log_value(double r) const {
  if (std::isnan(r)) return r;
  if (r < 0.0) throw std::domain_error("Young function argument must be >= 0");
  if (r == 0.0) return -kInf;
  switch (impl_->kind) {
    case YoungKind::power:
      return impl_->p * std::log(r);
    case YoungKind::scaled_power:
      return impl_->p * std::log(r) - std::log(impl_->p);
    case YoungKind::exp_minus_linear:
      if (r > 500.0) return r + std::log1p(-(r + 1.0) * std::exp(-r));
      return std::log((*this)(r));
    case YoungKind::linfty_step:
      return r <= 1.0 ? -kInf : kInf;
    case YoungKind::zygmund:
    case YoungKind::tabulated:
      return std::log((*this)(r));
  }
  return -kInf;
}

double YoungFunction::inverse(double s) const {
  if (std::isnan(s)) return s;
  if (s < 0.0) throw std::domain_error("inverse argument must be >= 0");
  switch (impl_->kind) {
    case YoungKind::power:
      if (std::isinf(s)) return kInf;
      return std::pow(s, 1.0 / impl_->p);
    case YoungKind::scaled_power:
      if (std::isinf(s)) return kInf;
      return std::pow(impl_->p * s, 1.0 / impl_->p);
    case YoungKind::linfty_step:
      return std::isinf(s) ? kInf : 1.0;
    case YoungKind::exp_minus_linear: {
      if (s == 0.0) return 0.0;
      if (std::isinf(s)) return kInf;
      const double guess = std::max(std::sqrt(2.0 * s), std::log1p(s));
      return detail::solve_increasing([this](double r) { return (*this)(r); }, s, guess);
    }
    case YoungKind::zygmund: {
      if (s == 0.0) return 0.0;
      if (std::isinf(s)) return kInf;
      return detail::solve_increasing([this](double r) { return (*this)(r); }, s,
                                      std::sqrt(2.0 * s) + s);
    }
    case YoungKind::tabulated:
      return impl_->tab->inverse(s);
  }
  return 0.0;
}

std::string YoungFunction::describe() const {
  std::ostringstream os;
  switch (impl_->kind) {
    case YoungKind::power: os << "power(p=" << impl_->p << ")"; break;
    case YoungKind::scaled_power: os << "scaled_power(p=" << impl_->p << ")"; break;
    case YoungKind::exp_minus_linear: os << "exp_minus_linear"; break;
    case YoungKind::linfty_step: os << "linfty_step"; break;
    case YoungKind::zygmund: os << "zygmund"; break;
    case YoungKind::tabulated:
      os << "tabulated[" << impl_->tab->x.size() << " pts";
      if (impl_->tab->x_end) os << ", end=" << *impl_->tab->x_end;
      os << "]";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// detail helpers

namespace detail {

double solve_increasing(const std::function<double(double)>& f, double s,
                        double guess, double rel_tol) {
  if (s <= 0.0) return 0.0;
  double hi = std::max(guess, 1e-300);
  double lo = hi;
  int guard = 0;
  while (f(hi) <= s) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 4200) return kInf;
  }
  guard = 0;
  while (f(lo) > s) {
    hi = lo;
    lo /= 2.0;
    if (++guard > 4200) return 0.0;
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > s ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

MonotoneTable invert_monotone_samples(const std::vector<double>& x,
                                      const std::vector<double>& g) {
  if (x.size() != g.size() || x.size() < 2)
    throw std::invalid_argument("invert_monotone_samples: need matched samples");
  MonotoneTable t;
  t.x.reserve(x.size());
  t.y.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(g[i] > 0.0) || !std::isfinite(g[i])) continue;
    if (!t.x.empty()) {
      if (g[i] < t.x.back() * (1.0 - 1e-12))
        throw NonMonotoneInverseError("inverse samples are not nondecreasing");
      if (g[i] <= t.x.back() * (1.0 + 5e-15)) continue;  // drop ties
    }
    t.x.push_back(g[i]);
    t.y.push_back(x[i]);
  }
  if (t.x.size() < 2)
    throw NonMonotoneInverseError("inverse samples collapse to a point");
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Legendre transform

YoungFunction conjugate_numeric(const YoungFunction& phi, const ConjugateOptions& opt) {
  std::vector<double> cand = opt.search_grid.abscissae();
  if (auto dend = phi.domain_end()) {
    // Values beyond the domain end contribute -inf; clamp the candidate set.
    std::vector<double> clipped;
    for (double s : cand)
      if (s <= *dend) clipped.push_back(s);
    if (clipped.empty() || clipped.back() < *dend) clipped.push_back(*dend);
    cand = std::move(clipped);
  }
  const std::size_t m = cand.size();
  std::vector<double> phi_at(m);
  for (std::size_t i = 0; i < m; ++i) phi_at[i] = phi(cand[i]);

  const std::vector<double> rs = opt.out_grid.abscissae();
  MonotoneTable out;
  std::size_t prev_k = 0;
  const bool bounded_domain = phi.domain_end().has_value();
  for (double r : rs) {
    auto gain = [&](std::size_t i) {
      const double v = phi_at[i];
      return std::isinf(v) ? -kInf : r * cand[i] - v;
    };
    std::size_t k = 0;
    if (opt.monotone_speedup) {
      k = prev_k;
      while (k + 1 < m && gain(k + 1) >= gain(k)) ++k;
    } else {
      double best = gain(0);
      for (std::size_t i = 1; i < m; ++i)
        if (gain(i) >= best) best = gain(i), k = i;
    }
    prev_k = k;
    if (!bounded_domain && k + 1 == m && m >= 2 && gain(k) > gain(k - 1)) {
      // Still climbing at the end of the search range: the supremum is +inf
      // from here on.
      if (out.x.size() < 2)
        throw std::invalid_argument("conjugate is infinite on the whole grid");
      out.x_end = out.x.back();
      break;
    }
    // Ternary refinement inside the bracketing neighbours; the objective is
    // concave in s, so the bracket contains the maximizer.
    double a = (k == 0) ? 0.0 : cand[k - 1];
    double b = (k + 1 < m) ? cand[k + 1] : cand[k];
    auto gval = [&](double s) {
      if (s < 0.0) return -kInf;
      const double v = phi(s);
      return std::isinf(v) ? -kInf : r * s - v;
    };
    for (int it = 0; it < opt.refine_iters && b - a > 1e-15 * b; ++it) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (gval(m1) < gval(m2))
        a = m1;
      else
        b = m2;
    }
    double best = std::max({0.0, gval(0.5 * (a + b)), gval(a), gval(b)});
    if (!std::isfinite(best)) {
      // Value overflowed: infinite from this abscissa on.
      if (out.x.size() < 2)
        throw std::invalid_argument("conjugate is infinite on the whole grid");
      out.x_end = out.x.back();
      break;
    }
    if (!out.y.empty()) best = std::max(best, out.y.back());  // clamp roundoff dips
    out.x.push_back(r);
    out.y.push_back(best);
  }
  return YoungFunction::tabulated(std::move(out));
}

YoungFunction conjugate(const YoungFunction& phi) {
  switch (phi.kind()) {
    case YoungKind::power: {
      const double p = phi.exponent();
      if (p == 1.0) return YoungFunction::linfty_step();
      // (p-1) (r/p)^{p'} sampled exactly; a pure power law interpolates
      // exactly in log-log coordinates.
      const double pp = p / (p - 1.0);
      MonotoneTable t;
      for (double r : TableGrid{}.abscissae()) {
        t.x.push_back(r);
        t.y.push_back((p - 1.0) * std::pow(r / p, pp));
      }
      return YoungFunction::tabulated(std::move(t));
    }
    case YoungKind::scaled_power:
      return YoungFunction::scaled_power(phi.exponent() / (phi.exponent() - 1.0));
    case YoungKind::exp_minus_linear:
      return YoungFunction::zygmund();
    case YoungKind::zygmund:
      return YoungFunction::exp_minus_linear();
    case YoungKind::linfty_step:
      return YoungFunction::power(1.0);
    case YoungKind::tabulated:
      return conjugate_numeric(phi);
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Growth classification

Classification classify(const YoungFunction& phi, const ClassifyOptions& opt) {
  Classification res;
  const TableGrid grid{opt.sample_lo, opt.sample_hi, opt.per_decade};
  const std::vector<double> ts = grid.abscissae();

  // Doubling condition: k = sup over samples of Phi(2r)/Phi(r), in log space.
  double worst = 0.0;  // ln of the ratio
  for (double r : ts) {
    const double l0 = phi.log_value(r), l1 = phi.log_value(2.0 * r);
    double d;
    if (std::isinf(l0) && l0 < 0)
      d = std::isinf(l1) && l1 < 0 ? 0.0 : kInf;
    else if (std::isinf(l0))  // both +inf
      d = 0.0;
    else
      d = l1 - l0;
    worst = std::max(worst, d);
  }
  res.delta2.searched_up_to = opt.k_max;
  if (std::exp(worst) <= opt.k_max) {
    res.delta2.holds = true;
    res.delta2.witness_k = std::exp(worst);
  }

  // Complementary doubling: some k > 1 with 2k Phi(r) <= Phi(kr) everywhere.
  res.nabla2.searched_up_to = opt.k_max;
  for (double k = std::sqrt(2.0); k <= opt.k_max; k *= std::sqrt(2.0)) {
    bool ok = true;
    const double lhs_shift = std::log(2.0 * k);
    for (double r : ts) {
      const double l0 = phi.log_value(r), l1 = phi.log_value(k * r);
      if (std::isinf(l0) && l0 < 0) continue;
      if (std::isinf(l1) && l1 > 0) continue;
      if (!(lhs_shift + l0 <= l1 + 1e-10)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      res.nabla2.holds = true;
      res.nabla2.witness_k = k;
      break;
    }
  }

  // Growth indices: extrema of the log-log slope, central differences inside
  // the grid, one-sided at the ends.
  std::vector<double> lv(ts.size());
  bool degenerate = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    lv[i] = phi.log_value(ts[i]);
    if (!std::isfinite(lv[i])) degenerate = true;
  }
  if (!degenerate && ts.size() >= 3) {
    double lo_slope = kInf, hi_slope = -kInf;
    auto push = [&](double num, double den) {
      const double s = num / den;
      lo_slope = std::min(lo_slope, s);
      hi_slope = std::max(hi_slope, s);
    };
    const auto ln = [](double v) { return std::log(v); };
    push(lv[1] - lv[0], ln(ts[1]) - ln(ts[0]));
    for (std::size_t i = 1; i + 1 < ts.size(); ++i)
      push(lv[i + 1] - lv[i - 1], ln(ts[i + 1]) - ln(ts[i - 1]));
    push(lv.back() - lv[lv.size() - 2], ln(ts.back()) - ln(ts[ts.size() - 2]));
    YoungIndices idx;
    idx.a_index = lo_slope >= 1.0 - 1e-9 ? std::max(lo_slope, 1.0) : lo_slope;
    idx.b_index = hi_slope;
    std::ostringstream os;
    os << "log[" << opt.sample_lo << "," << opt.sample_hi << "]x" << opt.per_decade
       << "/decade";
    idx.grid = os.str();
    res.indices = idx;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Global domination

DominationVerdict dominates_globally(const YoungFunction& big,
                                     const YoungFunction& small, double c_max,
                                     const DominationOptions& opt) {
  if (!(c_max > 0.0)) throw std::invalid_argument("dominates_globally: c_max > 0");
  const TableGrid sgrid{opt.s_lo, opt.s_hi, opt.s_per_decade};
  const std::vector<double> ss = sgrid.abscissae();
  std::vector<double> lsmall(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) lsmall[i] = small.log_value(ss[i]);

  DominationVerdict v;
  v.c_max = c_max;
  const int j_lo = static_cast<int>(std::ceil(std::log10(opt.c_min) * opt.c_per_decade));
  const int j_hi = static_cast<int>(std::floor(std::log10(c_max) * opt.c_per_decade + 1e-9));
  for (int j = j_lo; j <= j_hi; ++j) {
    const double c = std::pow(10.0, static_cast<double>(j) / opt.c_per_decade);
    bool ok = true;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const double ls = lsmall[i];
      if (std::isinf(ls) && ls < 0) continue;
      const double lb = big.log_value(c * ss[i]);
      if (std::isinf(lb) && lb > 0) continue;
      if (std::isinf(ls) && ls > 0) { ok = false; break; }
      if (!(ls <= lb + opt.slack)) { ok = false; break; }
    }
    if (ok) {
      v.holds = true;
      v.constant = c;
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Inverse-side constructions

YoungFunction compose_inverse_power(const YoungFunction& psi, double alpha, int n,
                                    const TableGrid& grid) {
  if (!(alpha >= 0.0) || !(alpha < n))
    throw std::invalid_argument("compose_inverse_power: need 0 <= alpha < n");
  if (alpha == 0.0) return psi;
  const std::vector<double> rs = grid.abscissae();
  std::vector<double> g(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    g[i] = std::pow(rs[i], alpha / n) * psi.inverse(rs[i]);
  return YoungFunction::tabulated(detail::invert_monotone_samples(rs, g));
}

YoungFunction build_auxiliary(const YoungFunction& f, double p, AuxKind which,
                              const TableGrid& grid) {
  if (!(p > 1.0)) throw std::invalid_argument("build_auxiliary: need p in (1, inf]");
  const double pp = std::isinf(p) ? 1.0 : p / (p - 1.0);
  const YoungFunction inner = (which == AuxKind::psi_p) ? f : conjugate(f);

  auto integrand = [&](double t) {
    return std::exp(inner.log_value(t) - (1.0 + pp) * std::log(t));
  };

  const std::vector<double> ss = grid.abscissae();
  const auto head = integrate_from_zero(integrand, ss.front());
  if (head.divergent || !head.converged)
    throw DivergentIntegralError("inner integral diverges near zero for " +
                                 inner.describe());
  MonotoneTable inner_cumulative;
  inner_cumulative.x.push_back(ss.front());
  inner_cumulative.y.push_back(head.value);
  for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
    const double panel = integrate_log_panel(integrand, ss[i], ss[i + 1]);
    const double next = inner_cumulative.y.back() + panel;
    if (std::isinf(next) || next > 1e280) {
      inner_cumulative.x_end = ss[i];
      break;
    }
    inner_cumulative.x.push_back(ss[i + 1]);
    inner_cumulative.y.push_back(next);
  }
  if (inner_cumulative.x.size() < 2)
    throw DivergentIntegralError("inner integral overflows immediately");

  auto outer_integrand = [&](double r) {
    const double u = std::exp(pp * std::log(r));
    const double binv = inner_cumulative.inverse(u);
    if (std::isinf(binv)) return kInf;
    if (binv <= 0.0) return 0.0;
    return std::exp((pp - 1.0) * std::log(r) + pp * std::log(binv));
  };

  const auto outer_head = integrate_from_zero(outer_integrand, ss.front());
  if (outer_head.divergent || !outer_head.converged)
    throw DivergentIntegralError("outer integral diverges near zero");
  MonotoneTable out;
  out.x.push_back(ss.front());
  out.y.push_back(outer_head.value);
  for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
    const double panel = integrate_log_panel(outer_integrand, ss[i], ss[i + 1]);
    const double next = out.y.back() + panel;
    if (std::isinf(next) || next > 1e280) {
      out.x_end = ss[i];
      break;
    }
    out.x.push_back(ss[i + 1]);
    out.y.push_back(next);
  }
  if (out.x.size() < 2) throw DivergentIntegralError("outer integral overflows immediately");

  YoungFunction result = YoungFunction::tabulated(std::move(out));
  if (which == AuxKind::psi_p) return conjugate(result);
  return result;
}

}  // namespace orlicz
