#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "orlicz/quadrature.hpp"
#include "orlicz/young.hpp"
#include "support/power_law_oracle.hpp"

using namespace orlicz;
using testsupport::aux_outer_power_law;
using testsupport::conjugate_power_law;
using testsupport::PowerLaw;

namespace {

const double inf = std::numeric_limits<double>::infinity();

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return out;
}

// Relative closeness that treats two infinities as equal.
bool close_rel(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b) && a == b;
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::vector<YoungFunction> builtin_kinds() {
  return {YoungFunction::power(1.0),      YoungFunction::power(2.0),
          YoungFunction::power(3.0),      YoungFunction::scaled_power(2.0),
          YoungFunction::exp_minus_linear(), YoungFunction::linfty_step(),
          YoungFunction::zygmund()};
}

}  // namespace

TEST_SUITE("young") {

TEST_CASE("evaluate closed forms") {
  CHECK(YoungFunction::power(2.0)(3.0) == doctest::Approx(9.0));
  CHECK(YoungFunction::linfty_step()(0.5) == 0.0);
  CHECK(YoungFunction::linfty_step()(1.0) == 0.0);
  CHECK(YoungFunction::linfty_step()(1.5) == inf);
  CHECK(YoungFunction::exp_minus_linear()(0.0) == 0.0);
  CHECK(YoungFunction::zygmund()(0.0) == 0.0);
  CHECK(YoungFunction::scaled_power(2.0)(4.0) == doctest::Approx(8.0));
  // tiny-argument series agree with the direct expressions at a safe scale
  CHECK(YoungFunction::exp_minus_linear()(1e-3) ==
        doctest::Approx(std::expm1(1e-3) - 1e-3).epsilon(1e-12));
  CHECK(YoungFunction::zygmund()(1e-3) ==
        doctest::Approx((1.0 + 1e-3) * std::log1p(1e-3) - 1e-3).epsilon(1e-10));
}

TEST_CASE("generalized inverse closed forms and plateaus") {
  CHECK(YoungFunction::power(2.0).inverse(9.0) == doctest::Approx(3.0));
  CHECK(YoungFunction::linfty_step().inverse(7.0) == doctest::Approx(1.0));
  CHECK(YoungFunction::linfty_step().inverse(0.0) == doctest::Approx(1.0));
  CHECK(YoungFunction::linfty_step().inverse(inf) == inf);
  CHECK(YoungFunction::power(1.0).inverse(inf) == inf);
  CHECK(YoungFunction::exp_minus_linear().inverse(0.0) == 0.0);
  const double s = 5.0;
  const double r = YoungFunction::exp_minus_linear().inverse(s);
  CHECK(YoungFunction::exp_minus_linear()(r) == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("inverse sandwich on every kind") {
  for (const auto& phi : builtin_kinds()) {
    for (double r : log_spaced(1e-6, 1e6, 60)) {
      const double a = phi(phi.inverse(r));
      CHECK(a <= r * (1.0 + 1e-3) + 1e-12);
      const double b = phi.inverse(phi(r));
      if (std::isinf(b)) continue;
      CHECK(r <= b * (1.0 + 1e-3) + 1e-12);
    }
  }
}

TEST_CASE("conjugate closed-form pairs") {
  const auto sp = conjugate(YoungFunction::scaled_power(3.0));
  REQUIRE(sp.kind() == YoungKind::scaled_power);
  CHECK(sp.exponent() == doctest::Approx(1.5));

  const auto lin = conjugate(YoungFunction::power(1.0));
  CHECK(lin.kind() == YoungKind::linfty_step);
  CHECK(conjugate(YoungFunction::linfty_step()).kind() == YoungKind::power);

  CHECK(conjugate(YoungFunction::exp_minus_linear()).kind() == YoungKind::zygmund);
  CHECK(conjugate(YoungFunction::zygmund()).kind() == YoungKind::exp_minus_linear);
}

TEST_CASE("numeric transform matches the closed forms") {
  // scaled power: conj(r^p/p) = r^{p'}/p'
  for (double p : {1.5, 2.0, 4.0}) {
    const double pc = p / (p - 1.0);
    const auto num = conjugate_numeric(YoungFunction::scaled_power(p));
    for (double r : log_spaced(1e-4, 1e4, 33)) {
      CHECK(num(r) == doctest::Approx(std::pow(r, pc) / pc).epsilon(1e-4));
    }
  }
  // exp conjugate is the zygmund function
  const auto zc = conjugate_numeric(YoungFunction::exp_minus_linear());
  for (double r : log_spaced(1e-3, 1e3, 25)) {
    CHECK(zc(r) == doctest::Approx(YoungFunction::zygmund()(r)).epsilon(1e-3));
  }
  // the linear function conjugates to the step
  const auto step = conjugate_numeric(YoungFunction::power(1.0));
  CHECK(step(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(step(2.0) == inf);
  CHECK(step.inverse(123.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("full scan agrees with the monotone-maximizer speedup") {
  ConjugateOptions slow;
  slow.monotone_speedup = false;
  slow.out_grid = TableGrid{1e-4, 1e4, 16};
  ConjugateOptions fast = slow;
  fast.monotone_speedup = true;
  for (const auto& phi : {YoungFunction::power(2.0), YoungFunction::zygmund()}) {
    const auto a = conjugate_numeric(phi, slow);
    const auto b = conjugate_numeric(phi, fast);
    for (double r : log_spaced(1e-3, 1e3, 40)) {
      CHECK(close_rel(a(r), b(r), 1e-10));
    }
  }
}

TEST_CASE("double conjugation returns the original") {
  // Valid where the second transform's maximizer stays inside the first
  // table's abscissa range: for the exp kind that means r below the slope of
  // the tabulated conjugate at its right end (~ log of the table top).
  for (const auto& phi :
       {YoungFunction::power(2.0), YoungFunction::scaled_power(3.0)}) {
    const auto back = conjugate_numeric(conjugate_numeric(phi));
    for (double r : log_spaced(1e-3, 1e3, 25)) {
      CHECK(close_rel(back(r), phi(r), 1e-3));
    }
  }
  const auto phi = YoungFunction::exp_minus_linear();
  const auto back = conjugate_numeric(conjugate_numeric(phi));
  for (double r : log_spaced(1e-3, 10.0, 25)) {
    CHECK(close_rel(back(r), phi(r), 1e-3));
  }
}

TEST_CASE("inverse product bracket r <= inv(phi) inv(conj) <= 2r") {
  for (const auto& phi : builtin_kinds()) {
    const auto tilde = conjugate(phi);
    for (double r : log_spaced(1e-5, 1e5, 50)) {
      const double prod = phi.inverse(r) * tilde.inverse(r);
      CHECK(prod >= r * (1.0 - 1e-3));
      CHECK(prod <= 2.0 * r * (1.0 + 1e-3));
    }
  }
}

TEST_CASE("growth classification of the built-ins") {
  const auto lin = classify(YoungFunction::power(1.0));
  CHECK(lin.delta2.holds);
  CHECK(lin.delta2.witness_k == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(lin.nabla2.holds);

  for (double p : {1.5, 2.0, 3.0}) {
    const auto c = classify(YoungFunction::power(p));
    CHECK(c.delta2.holds);
    CHECK(c.nabla2.holds);
    REQUIRE(c.indices.has_value());
    CHECK(c.indices->a_index == doctest::Approx(p).epsilon(1e-6));
    CHECK(c.indices->b_index == doctest::Approx(p).epsilon(1e-6));
  }

  const auto e = classify(YoungFunction::exp_minus_linear());
  CHECK_FALSE(e.delta2.holds);
  CHECK(e.nabla2.holds);

  const auto step = classify(YoungFunction::linfty_step());
  CHECK_FALSE(step.delta2.holds);
  CHECK(step.nabla2.holds);
  CHECK_FALSE(step.indices.has_value());  // slope degenerates on the flat part
}

TEST_CASE("complementary growth duality") {
  for (const auto& phi : builtin_kinds()) {
    const auto a = classify(phi);
    const auto b = classify(conjugate(phi));
    CHECK(a.nabla2.holds == b.delta2.holds);
  }
}

TEST_CASE("convexity scaling bounds") {
  for (const auto& phi : builtin_kinds()) {
    for (double t : log_spaced(1e-4, 1e2, 15)) {
      for (double a : {0.1, 0.5, 0.9}) {
        CHECK(phi(a * t) <= a * phi(t) * (1.0 + 1e-12) + 1e-300);
      }
      for (double b : {1.5, 4.0}) {
        const double lhs = phi(b * t), rhs = b * phi(t);
        if (std::isinf(lhs)) continue;
        CHECK(lhs >= rhs * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("global domination verdicts") {
  const auto same = dominates_globally(YoungFunction::power(2.0),
                                       YoungFunction::power(2.0), 10.0);
  CHECK(same.holds);
  CHECK(same.constant == doctest::Approx(1.0));

  const auto no = dominates_globally(YoungFunction::power(2.0),
                                     YoungFunction::power(1.0), 1e3);
  CHECK_FALSE(no.holds);

  // Q built from the matching exponent pair collapses to power(p)
  const double q = 3.0, an = 0.2;
  const double p = 1.0 / (an + 1.0 / q);
  const auto Q = compose_inverse_power(YoungFunction::power(q), an, 1);
  const auto dom = dominates_globally(YoungFunction::power(p), Q, 10.0);
  CHECK(dom.holds);
  CHECK(dom.constant == doctest::Approx(1.0));
}

TEST_CASE("inverse-side composition") {
  // alpha = n/2 against a square collapses the inverse to the identity
  const auto Q = compose_inverse_power(YoungFunction::power(2.0), 0.5, 1);
  for (double s : log_spaced(1e-3, 1e3, 20)) {
    CHECK(Q(s) == doctest::Approx(s).epsilon(1e-9));
  }
  // alpha = 0 returns the input itself
  const auto same = compose_inverse_power(YoungFunction::power(2.0), 0.0, 1);
  CHECK(same.kind() == YoungKind::power);

  // generic exponent arithmetic
  const double q = 3.0, an = 0.2, p = 1.0 / (an + 1.0 / q);
  const auto Qp = compose_inverse_power(YoungFunction::power(q), an, 1);
  for (double s : log_spaced(1e-2, 1e2, 15)) {
    CHECK(Qp(s) == doctest::Approx(std::pow(s, p)).epsilon(1e-9));
  }

  CHECK_THROWS_AS(compose_inverse_power(YoungFunction::power(2.0), 1.2, 1),
                  std::invalid_argument);
}

TEST_CASE("non-monotone inverse samples are rejected") {
  CHECK_THROWS_AS(
      detail::invert_monotone_samples({1.0, 2.0, 3.0}, {1.0, 0.5, 2.0}),
      NonMonotoneInverseError);
}

TEST_CASE("auxiliary pipeline reproduces the power-law closed form") {
  // inner function t^q at index P, then one conjugation
  const double q = 2.4, P = 4.0;
  const auto psi_p = build_auxiliary(YoungFunction::power(q), P, AuxKind::psi_p);
  const PowerLaw expect = conjugate_power_law(aux_outer_power_law(1.0, q, P));
  for (double r : log_spaced(1e-2, 1e2, 17)) {
    CHECK(psi_p(r) == doctest::Approx(expect(r)).epsilon(1e-3));
  }
  CHECK(psi_p(0.0) == 0.0);

  // conjugate-side variant on a scaled power: inner is scaled_power(p0')
  const double p0 = 2.0;
  const auto phi_p = build_auxiliary(YoungFunction::scaled_power(p0), P, AuxKind::phi_p);
  const double p0c = p0 / (p0 - 1.0);
  const PowerLaw expect2 = aux_outer_power_law(1.0 / p0c, p0c, P);
  for (double r : log_spaced(1e-2, 1e2, 17)) {
    CHECK(phi_p(r) == doctest::Approx(expect2(r)).epsilon(1e-3));
  }
}

TEST_CASE("auxiliary pipeline flags divergent inner integrals") {
  // q equal to the conjugate exponent makes the inner integrand 1/t
  CHECK_THROWS_AS(build_auxiliary(YoungFunction::power(4.0 / 3.0), 4.0, AuxKind::psi_p),
                  DivergentIntegralError);
  CHECK_THROWS_AS(build_auxiliary(YoungFunction::power(1.2), 4.0, AuxKind::psi_p),
                  DivergentIntegralError);
}

TEST_CASE("sandwich holds for construction outputs") {
  std::vector<YoungFunction> built;
  built.push_back(compose_inverse_power(YoungFunction::power(2.0), 0.25, 1));
  built.push_back(build_auxiliary(YoungFunction::power(2.4), 4.0, AuxKind::psi_p));
  built.push_back(build_auxiliary(YoungFunction::scaled_power(2.0), 4.0, AuxKind::phi_p));
  for (const auto& phi : built) {
    const auto tilde = conjugate(phi);
    for (double r : log_spaced(1e-3, 1e3, 40)) {
      CHECK(phi(phi.inverse(r)) <= r * (1.0 + 1e-3));
      const double b = phi.inverse(phi(r));
      if (!std::isinf(b)) CHECK(r <= b * (1.0 + 1e-3));
      const double prod = phi.inverse(r) * tilde.inverse(r);
      CHECK(prod >= r * (1.0 - 2e-3));
      CHECK(prod <= 2.0 * r * (1.0 + 2e-3));
    }
  }
}

TEST_CASE("tabulated csv round trip with inf token") {
  std::istringstream csv("0.5,0.0\n1.0,0.0\n2.0,inf\n");
  const auto phi = YoungFunction::from_csv(csv);
  CHECK(phi(0.7) == 0.0);
  CHECK(phi(1.5) == inf);
  CHECK(phi.inverse(5.0) == doctest::Approx(1.0));

  std::istringstream quad("0.1,0.01\n1.0,1.0\n10.0,100.0\n");
  const auto sq = YoungFunction::from_csv(quad);
  CHECK(sq(3.0) == doctest::Approx(9.0).epsilon(1e-9));
}

}  // TEST_SUITE
