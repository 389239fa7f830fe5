#include <doctest.h>

#include <cmath>
#include <random>

#include "homog/error.hpp"
#include "homog/funcspec.hpp"
#include "homog/quadrature.hpp"
#include "instances.hpp"

using namespace homog;
using homog::testing::kPi;

TEST_CASE("eval on each class") {
  CHECK(FunctionSpec::polynomial({0.0, 1.0})(0.7) == 0.7);
  CHECK(FunctionSpec::trig(2.0, {}, {1.0})(0.25) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(FunctionSpec::piecewise_constant({0.0, 0.5, 1.0}, {1.0, 2.0})(0.75) == 2.0);
  CHECK(FunctionSpec::piecewise_constant({0.0, 0.5, 1.0}, {1.0, 2.0})(0.5) == 2.0);
  CHECK(FunctionSpec::constant(4.5)(0.123) == 4.5);
  CHECK(homog::testing::sin_pi()(0.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(FunctionSpec::polynomial({}), PreconditionError);
  CHECK_THROWS_AS(FunctionSpec::piecewise_constant({0.0, 0.6, 0.5, 1.0}, {1, 2, 3}), PreconditionError);
  CHECK_THROWS_AS(FunctionSpec::piecewise_constant({0.1, 1.0}, {1}), PreconditionError);
  CHECK_THROWS_AS(FunctionSpec::piecewise_constant({0.0, 0.5, 1.0}, {1}), PreconditionError);
  CHECK_THROWS_AS(FunctionSpec::trig(0.0, {}, {1.0}, 0.0), PreconditionError);
  // Shorter list is padded with zeros.
  const auto t = FunctionSpec::trig(1.0, {0.5, 0.25}, {1.0});
  CHECK(t(0.3) == doctest::Approx(1.0 + 0.5 * std::cos(2 * kPi * 0.3) +
                                  0.25 * std::cos(4 * kPi * 0.3) + std::sin(2 * kPi * 0.3)));
}

TEST_CASE("antiderivative closed forms") {
  const auto one = FunctionSpec::constant(1.0).antiderivative();
  CHECK(one(0.0) == 0.0);
  CHECK(one(0.37) == doctest::Approx(0.37).epsilon(1e-15));

  const auto x = FunctionSpec::polynomial({0.0, 1.0}).antiderivative();
  CHECK(x(0.6) == doctest::Approx(0.18).epsilon(1e-15));

  const auto s = FunctionSpec::trig(0.0, {}, {1.0}).antiderivative();
  for (double y : {0.0, 0.1, 0.35, 0.8})
    CHECK(s(y) == doctest::Approx((1.0 - std::cos(2 * kPi * y)) / (2 * kPi)).epsilon(1e-14));

  const auto p = FunctionSpec::piecewise_constant({0.0, 0.5, 1.0}, {1.0, 2.0}).antiderivative();
  CHECK(p(0.25) == doctest::Approx(0.25));
  CHECK(p(0.75) == doctest::Approx(0.5 + 0.5));
  CHECK(p(1.0) == doctest::Approx(1.5));
}

TEST_CASE("antiderivative differentiates back to the function") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  const FunctionSpec specs[] = {
      FunctionSpec::constant(-2.0),
      FunctionSpec::polynomial({1.0, -3.0, 0.5, 2.0}),
      FunctionSpec::trig(0.5, {0.3, -0.2}, {1.0, 0.7}),
      homog::testing::sin_pi(),
      FunctionSpec::piecewise_constant({0.0, 0.3, 0.7, 1.0}, {1.0, -1.0, 2.0}),
  };
  const double h = 1e-6;
  for (const auto& g : specs) {
    const auto big = g.antiderivative();
    CHECK(big(0.0) == 0.0);
    const auto bps = g.interior_breakpoints();
    int checked = 0;
    while (checked < 100) {
      const double x = u(rng);
      bool near = false;
      for (double b : bps) near = near || std::abs(x - b) < 1e-4;
      if (near) continue;
      const double fd = (big(x + h) - big(x - h)) / (2 * h);
      CHECK(std::abs(fd - g(x)) <= 1e-5);
      ++checked;
    }
  }
}

TEST_CASE("definite integrals") {
  CHECK(FunctionSpec::constant(3.5).integral(0.0, 1.0) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(std::abs(FunctionSpec::trig(0.0, {}, {1.0}).integral(0.0, 1.0)) <= 1e-15);
  CHECK(std::abs(homog::testing::codim2_rhs().integral(0.0, 1.0)) <= 1e-15);
  CHECK(homog::testing::sin_pi().integral(0.0, 1.0) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
}

TEST_CASE("closed-form integrals agree with composite Gauss") {
  const FunctionSpec specs[] = {
      FunctionSpec::constant(1.25),
      FunctionSpec::polynomial({0.3, -1.0, 4.0, -2.0, 0.5}),
      FunctionSpec::trig(2.0, {0.1, 0.2, 0.3}, {-1.0, 0.4, 0.0}),
      homog::testing::sin_pi(),
  };
  for (const auto& g : specs) {
    const double gauss = integrate([&](double x) { return g(x); }, 0.0, 1.0, 16, GaussRule::legendre(16));
    CHECK(std::abs(g.integral(0.0, 1.0) - gauss) <= 1e-12);
  }
  const auto pw = FunctionSpec::piecewise_constant({0.0, 0.25, 1.0}, {2.0, -1.0});
  const std::vector<double> part{0.0, 0.25, 1.0};
  CHECK(std::abs(pw.integral(0.0, 1.0) -
                 integrate_partition([&](double x) { return pw(x); }, part, GaussRule::legendre(16))) <=
        1e-12);
}

TEST_CASE("derivative and differentiability") {
  const auto d = FunctionSpec::trig(0.0, {1.0}, {0.0}).derivative();
  CHECK(d(0.25) == doctest::Approx(-2 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(FunctionSpec::piecewise_constant({0.0, 0.5, 1.0}, {1.0, 2.0}).derivative(),
                  NumericalError);
}

TEST_CASE("periodic scaled evaluation") {
  const auto three = PeriodicCoefficient::from_profile(FunctionSpec::constant(3.0));
  CHECK(eval_periodic_scaled(three, 0.77, 0.1) == 3.0);

  const auto a = PeriodicCoefficient::from_profile(FunctionSpec::trig(2.0, {}, {1.0}));
  const double eps = 1.0 / 8;
  CHECK(eval_periodic_scaled(a, eps / 4, eps) == doctest::Approx(a.value(0.25)).epsilon(1e-15));
  CHECK(eval_periodic_scaled(a, -eps / 4, eps) == doctest::Approx(a.value(0.75)).epsilon(1e-14));
  CHECK(a.value(-0.25) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(eval_periodic_scaled(a, x + eps, eps) == doctest::Approx(eval_periodic_scaled(a, x, eps)).epsilon(1e-12));
  }
  CHECK(wrap_unit(-1e-20) < 1.0);
  CHECK(wrap_unit(-1e-20) >= 0.0);
  CHECK(wrap_unit(3.0) == 0.0);
}

TEST_CASE("certified minimum") {
  CHECK(certified_minimum(FunctionSpec::constant(2.0)) == 2.0);

  // a = 1/(2 + sin 2 pi x) by brute force on 10^6 points.
  const auto a = homog::testing::main_coefficient();
  double brute = 1e300;
  for (int i = 0; i <= 1000000; ++i) {
    const double x = i / 1e6;
    brute = std::min(brute, 1.0 / (2.0 + std::sin(2 * kPi * x)));
  }
  CHECK(a.lower_bound() <= brute);
  CHECK(a.lower_bound() >= 1.0 / 3.0 - 1e-9);

  const auto poly = FunctionSpec::polynomial({1.0, -2.0});
  CHECK(certified_minimum(poly) <= -1.0);
  CHECK(certified_minimum(poly) >= -1.0 - 1e-9);
  CHECK_THROWS_AS(PeriodicCoefficient::from_profile(poly), PreconditionError);
  CHECK_THROWS_AS(PeriodicCoefficient::from_reciprocal(FunctionSpec::trig(0.5, {}, {1.0})),
                  PreconditionError);

  const auto pw = FunctionSpec::piecewise_constant({0.0, 0.4, 1.0}, {3.0, 0.5});
  CHECK(certified_minimum(pw) == 0.5);
  CHECK(certified_maximum(pw) == 3.0);

  const auto trig = FunctionSpec::trig(0.0, {0.3}, {0.4});
  CHECK(certified_maximum(trig) >= 0.5);
  CHECK(certified_maximum(trig) <= 0.5 + 1e-9);
  CHECK(certified_sup_abs(trig) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("coefficient conventions") {
  const auto a = homog::testing::main_coefficient();
  CHECK(a.convention() == CoefficientConvention::Reciprocal);
  CHECK(a.reciprocal(0.25) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(a.value(0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // a' = -b'/b^2 with b = 2 + sin 2 pi z.
  CHECK(a.derivative(0.0) == doctest::Approx(-2 * kPi / 4.0).epsilon(1e-14));

  const auto pw = PeriodicCoefficient::from_profile(
      FunctionSpec::piecewise_constant({0.0, 0.5, 1.0}, {1.0, 2.0}));
  CHECK_FALSE(pw.within_theory_hypotheses());
  CHECK(pw.cell_breakpoints() == std::vector<double>{0.5});
  CHECK_THROWS_AS(pw.derivative(0.2), NumericalError);
}
