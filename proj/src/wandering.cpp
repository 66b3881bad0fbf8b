#include "turbeam/wandering.hpp"

#include <cmath>

#include "turbeam/constants.hpp"
#include "turbeam/errors.hpp"
#include "turbeam/meanfield.hpp"

namespace turbeam {

namespace {

CollisionConstants checked_constants(const BeamParams& beam,
                                     const SpectrumModel& spec) {
  beam.validate();
  CollisionConstants cc = collision_constants(spec, beam.omega0());
  if (!(beam.time > 0.0) || !(cc.alpha > 0.0))
    throw RegimeError("wandering: undefined at t = 0 or without turbulence");
  return cc;
}

}  // namespace

double wander_classical(const BeamParams& beam, const SpectrumModel& spec) {
  CollisionConstants cc = checked_constants(beam, spec);
  return 1.0 / (2.0 * cc.alpha * beam.time);
}

double wander_shot(const BeamParams& beam, const SpectrumModel& spec) {
  CollisionConstants cc = checked_constants(beam, spec);
  double ct = beam.distance();
  double q0 = beam.q0();
  return 4.0 * cc.alpha * ct * ct * beam.time /
         (3.0 * q0 * q0 * beam.n_photons);
}

double wander_crossover_time(const BeamParams& beam, const SpectrumModel& spec) {
  beam.validate();
  CollisionConstants cc = collision_constants(spec, beam.omega0());
  if (!(cc.alpha > 0.0)) throw RegimeError("wandering: needs turbulence");
  double q0 = beam.q0();
  double c = kSpeedOfLight;
  return std::pow(3.0 * beam.n_photons * q0 * q0 /
                      (8.0 * cc.alpha * cc.alpha * c * c),
                  0.25);
}

WanderReport wander_report(const BeamParams& beam, const SpectrumModel& spec) {
  WanderReport rep;
  rep.r2_classical = wander_classical(beam, spec);
  rep.r2_shot = wander_shot(beam, spec);
  rep.total = rep.r2_classical + rep.r2_shot;
  rep.crossover_time = wander_crossover_time(beam, spec);
  return rep;
}

// Centroid integrals evaluated by radial quadrature. Classical:
//   R^2 = (1/N^2) Int d2rA d2rB (rA.rB) <dI dI>_cl
// in (v, D) = (rA + rB, rA - rB) variables; rA.rB = (v^2 - D^2)/4 and the
// correlation factorizes into Gaussians in v and D, so the 4D integral is a
// combination of four radial moments. The -D^2 piece is the finite-coherence
// correction the closed form 1/(2 alpha t) drops.
double wander_quadrature(const BeamParams& beam, const SpectrumModel& spec,
                         WanderPart part, const QuadratureSettings& settings) {
  settings.validate();
  checked_constants(beam, spec);
  Moments m = moments(beam, spec);
  const double r2 = m.r2_mean;
  const double q2 = m.q2_mean;
  const double n = beam.n_photons;
  const double tol = settings.rel_tol_1d;
  const int budget = 50 * settings.max_nodes_1d;

  auto radial_moment = [&](double s, int pow2) {
    // Int d2x x^(2 pow2) exp(-x^2/s), cut where the integrand is ~1e-26.
    double cut = std::sqrt(s * 60.0);
    auto f = [s, pow2](double x) {
      double v = 2.0 * M_PI * x * std::exp(-x * x / s);
      for (int i = 0; i < pow2; ++i) v *= x * x;
      return v;
    };
    return integrate_radial(f, 0.0, cut, tol, budget).value;
  };

  if (part == WanderPart::Shot) {
    // (1/N^2) Int d2r r^2 <I(r)>, delta-correlated shot kernel.
    double cut = std::sqrt(r2 * 60.0);
    auto f = [&](double x) {
      return 2.0 * M_PI * x * x * x * mean_intensity(beam, spec, Vec2{x, 0.0});
    };
    return integrate_radial(f, 0.0, cut, tol, budget).value / (n * n);
  }

  double inv_a2 = n / (M_PI * r2);
  double iv0 = radial_moment(2.0 * r2, 0);
  double iv2 = radial_moment(2.0 * r2, 1);
  double id0 = radial_moment(8.0 / q2, 0);
  double id2 = radial_moment(8.0 / q2, 1);
  return inv_a2 * inv_a2 / (16.0 * n * n) * (iv2 * id0 - iv0 * id2);
}

}  // namespace turbeam
