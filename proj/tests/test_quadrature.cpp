#include <cmath>

#include "doctest.h"
#include "turbeam/errors.hpp"
#include "turbeam/quadrature.hpp"

using namespace turbeam;

TEST_CASE("integrate_radial matches elementary antiderivatives") {
  auto r = integrate_radial([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.error_bound <= 1e-10);

  r = integrate_radial([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  r = integrate_radial([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-12);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate_radial handles oscillatory cancellation to near zero") {
  auto r = integrate_radial([](double x) { return std::sin(x); }, 0.0,
                            10.0 * M_PI, 1e-10);
  CHECK(std::abs(r.value) < 1e-9);
}

TEST_CASE("integrate_radial throws NumericalError when the budget runs out") {
  // A fast oscillation cannot be resolved with a 45-node budget; the best
  // estimate must still be finite and carry a nonzero error bound.
  auto osc = [](double x) { return std::sin(1000.0 * x); };
  CHECK_THROWS_AS(integrate_radial(osc, 0.0, 1.0, 1e-12, 45), NumericalError);
  try {
    integrate_radial(osc, 0.0, 1.0, 1e-12, 45);
  } catch (const NumericalError& e) {
    CHECK(std::isfinite(e.best_estimate));
    CHECK(e.error_bound > 0.0);
  }
}

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly") {
  const GaussRule& rule = gauss_legendre(5);
  REQUIRE(rule.x.size() == 5);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    double x = rule.x[i];
    s += rule.w[i] * (std::pow(x, 9) + 3.0 * std::pow(x, 8) + x * x - 2.0);
  }
  // Int_{-1}^{1}: odd terms vanish, x^8 -> 2/9, x^2 -> 2/3, const -> -4
  CHECK(s == doctest::Approx(3.0 * 2.0 / 9.0 + 2.0 / 3.0 - 4.0).epsilon(1e-13));
}

TEST_CASE("gauss_hermite reproduces Gaussian moments") {
  const GaussRule& rule = gauss_hermite(32);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    m0 += rule.w[i];
    m2 += rule.w[i] * rule.x[i] * rule.x[i];
    m4 += rule.w[i] * std::pow(rule.x[i], 4);
  }
  CHECK(m0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("integrate_gauss_weighted_2d against closed-form moments") {
  double sigma = 0.7;
  double mass = integrate_gauss_weighted_2d(
      [](double, double) { return 1.0; }, sigma);
  CHECK(mass == doctest::Approx(2.0 * M_PI * sigma * sigma).epsilon(1e-12));

  double second = integrate_gauss_weighted_2d(
      [](double x, double y) { return x * x + y * y; }, sigma);
  CHECK(second == doctest::Approx(4.0 * M_PI * std::pow(sigma, 4)).epsilon(1e-12));

  // A smooth non-polynomial factor: Int cos(a x) weight = analytic Gaussian FT
  double a = 1.3;
  double osc = integrate_gauss_weighted_2d(
      [a](double x, double) { return std::cos(a * x); }, sigma);
  double expect = 2.0 * M_PI * sigma * sigma *
                  std::exp(-0.5 * a * a * sigma * sigma);
  CHECK(osc == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("find_root_bisection") {
  double root = find_root_bisection([](double x) { return std::cos(x); }, 1.0,
                                    2.0, 1e-13);
  CHECK(root == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
}
