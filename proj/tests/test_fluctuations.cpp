#include <cmath>
#include <random>

#include "doctest.h"
#include "turbeam/errors.hpp"
#include "turbeam/fluctuations.hpp"
#include "turbeam/quadrature.hpp"

using namespace turbeam;

namespace {

struct Setup {
  BeamParams beam;
  SpectrumModel spec = SpectrumModel::gaussian(0.0, 0.05);
  Moments m;
};

Setup make_setup(double nut = 50.0) {
  Setup s;
  s.beam.wavelength = 1.55e-6;
  s.beam.r0 = 0.01;
  s.beam.time = 1e-3;
  s.beam.n_photons = 1e6;
  double l = 0.05;
  double om = s.beam.omega0();
  double nu = nut / s.beam.time;
  double A = nu * kSpeedOfLight * l * l / (8.0 * M_PI * M_PI * om * om);
  s.spec = SpectrumModel::gaussian(A, l);
  s.m = moments(s.beam, s.spec);
  return s;
}

}  // namespace

TEST_CASE("r1_squared closed form") {
  CHECK(r1_squared(0.01, 0.0) == doctest::Approx(1e-4).epsilon(1e-15));
  double g2 = 3.0e4;
  CHECK(r1_squared(0.01, g2) ==
        doctest::Approx(1e-4 / (1.0 + 1e-4 * g2)).epsilon(1e-15));
  CHECK_THROWS_AS(r1_squared(0.0, 1.0), ConfigError);
}

TEST_CASE("g2 = 0 diffuser reproduces the no-diffuser correlation") {
  Setup s = make_setup();
  DiffuserParams d0{0.0};
  double rr = std::sqrt(s.m.r2_mean);
  for (double fa : {0.0, 0.3, 0.9}) {
    for (double fb : {-0.5, 0.2}) {
      Vec2 rA{fa * rr, 0.1 * rr}, rB{fb * rr, -0.2 * rr};
      auto base = correlation_no_diffuser(s.beam, s.spec, rA, rB);
      auto with = correlation_with_diffuser(s.beam, s.spec, d0, rA, rB);
      CHECK(with.classical ==
            doctest::Approx(base.classical).epsilon(1e-12));
      CHECK(with.total == doctest::Approx(base.total).epsilon(1e-12));
      CHECK(with.kernel_width_sq == 0.0);
    }
  }
}

TEST_CASE("shot kernel: unit mass and exact width") {
  Setup s = make_setup();
  DiffuserParams d{2.0 / (s.beam.r0 * s.beam.r0)};
  double w_expect = s.beam.r0 * s.beam.r0 - r1_squared(s.beam.r0, d.g2);

  auto corr = correlation_with_diffuser(s.beam, s.spec, d, Vec2{}, Vec2{});
  CHECK(corr.kernel_width_sq == w_expect);  // exact, no rounding allowed

  // radial quadrature of the isotropic kernel
  auto mass_f = [&](double x) {
    return 2.0 * M_PI * x * shot_kernel(s.beam, d, Vec2{x, 0.0}, Vec2{});
  };
  double mass =
      integrate_radial(mass_f, 0.0, 12.0 * std::sqrt(w_expect), 1e-12, 20000).value;
  CHECK(std::abs(mass - 1.0) <= 1e-10);

  auto width_f = [&](double x) {
    return 2.0 * M_PI * x * x * x * shot_kernel(s.beam, d, Vec2{x, 0.0}, Vec2{});
  };
  double width2 =
      integrate_radial(width_f, 0.0, 12.0 * std::sqrt(w_expect), 1e-12, 20000).value;
  CHECK(width2 == doctest::Approx(w_expect).epsilon(1e-9));

  CHECK_THROWS_AS(shot_kernel(s.beam, DiffuserParams{0.0}, Vec2{}, Vec2{}),
                  ConfigError);
}

TEST_CASE("scintillation index is exactly 1 without diffuser and shot") {
  Setup s = make_setup();
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  double rr = std::sqrt(s.m.r2_mean);
  for (int i = 0; i < 10; ++i) {
    Vec2 r{U(gen) * rr, U(gen) * rr};
    double sigma2 = scintillation_index(s.beam, s.spec, std::nullopt, r);
    CHECK(std::abs(sigma2 - 1.0) <= 1e-12);
  }
}

TEST_CASE("shot contribution raises the scintillation index") {
  Setup s = make_setup();
  DiffuserParams d{1.0 / (s.beam.r0 * s.beam.r0)};
  double area = 1e-6;
  double with_shot =
      scintillation_index(s.beam, s.spec, d, Vec2{}, true, area);
  double without = scintillation_index(s.beam, s.spec, d, Vec2{});
  CHECK(without < 1.0);  // diffuser suppresses the classical part
  CHECK(with_shot > without);
  CHECK_THROWS_AS(scintillation_index(s.beam, s.spec, d, Vec2{}, true, 0.0),
                  ConfigError);
}

TEST_CASE("classical suppression is monotone in g2 and matches the estimate order") {
  Setup s = make_setup();
  double prev = 2.0;
  for (int i = 1; i <= 10; ++i) {
    DiffuserParams d{i * 0.4 / (s.beam.r0 * s.beam.r0)};
    double ratio = suppression_ratio_exact(s.beam, s.spec, d);
    CHECK(ratio < prev);
    prev = ratio;
    // the moderate-diffuser estimate is a stronger suppression than the
    // exact ratio (exp(-x/4)-type vs 1/(1+x/8))
    CHECK(suppression_factor(s.beam, s.spec, d) <= ratio);
  }
}

TEST_CASE("suppression ratio equals the center-beam classical ratio") {
  Setup s = make_setup();
  DiffuserParams d{0.7 / (s.beam.r0 * s.beam.r0)};
  auto base = correlation_no_diffuser(s.beam, s.spec, Vec2{}, Vec2{});
  auto with = correlation_with_diffuser(s.beam, s.spec, d, Vec2{}, Vec2{});
  CHECK(with.classical / base.classical ==
        doctest::Approx(suppression_ratio_exact(s.beam, s.spec, d)).epsilon(1e-12));
}

TEST_CASE("closed-form classical term matches the double-q quadrature oracle") {
  Setup s = make_setup();
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  double rr = std::sqrt(s.m.r2_mean);
  double corr_len = 1.0 / std::sqrt(s.m.q2_mean);
  for (int i = 0; i < 3; ++i) {
    Vec2 rA{U(gen) * rr, U(gen) * rr};
    Vec2 rB = rA + Vec2{U(gen) * 3.0 * corr_len, U(gen) * 3.0 * corr_len};
    for (double g2 : {0.0, 0.8 / (s.beam.r0 * s.beam.r0)}) {
      DiffuserParams d{g2};
      auto closed = correlation_with_diffuser(s.beam, s.spec, d, rA, rB);
      double oracle =
          correlation_classical_quadrature(s.beam, s.spec, g2, rA, rB);
      CHECK(oracle == doctest::Approx(closed.classical).epsilon(1e-4));
    }
  }
}

TEST_CASE("correlation is singular at t = 0") {
  BeamParams beam;
  beam.time = 0.0;
  auto spec = SpectrumModel::gaussian(1e-20, 0.05);
  CHECK_THROWS_AS(correlation_no_diffuser(beam, spec, Vec2{}, Vec2{}),
                  RegimeError);
}
