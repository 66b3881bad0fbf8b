#include "turbeam/fluctuations.hpp"

#include <cmath>

#include "turbeam/constants.hpp"
#include "turbeam/errors.hpp"
#include "turbeam/quadrature.hpp"

namespace turbeam {

double r1_squared(double r0, double g2) {
  if (!(r0 > 0.0)) throw ConfigError("r1_squared: r0 must be > 0");
  if (!(g2 >= 0.0)) throw ConfigError("r1_squared: g2 must be >= 0");
  return r0 * r0 / (1.0 + r0 * r0 * g2);
}

namespace {

// Shared closed form; g2 = 0 reduces to the no-diffuser expressions through
// the same arithmetic (w = 0 exactly).
CorrelationDecomposition correlation_impl(const BeamParams& beam,
                                          const SpectrumModel& spec, double g2,
                                          Vec2 rA, Vec2 rB) {
  beam.validate();
  Moments m = moments(beam, spec);
  if (!(m.r2_mean > 0.0))
    throw RegimeError("correlation: undefined at t = 0 or without turbulence");
  const double q2 = m.q2_mean;
  const double r2 = m.r2_mean;
  const double inv_a2 = beam.n_photons / (M_PI * r2);
  const double w = beam.r0 * beam.r0 - r1_squared(beam.r0, g2);
  const Vec2 sum = rA + rB;
  const Vec2 d = rA - rB;

  CorrelationDecomposition out;
  out.kernel_width_sq = w;
  out.classical = inv_a2 * inv_a2 / (1.0 + w * q2 / 8.0) *
                  std::exp(-sum.norm_sq() / (2.0 * r2) -
                           d.norm_sq() / (8.0 / q2 + w));
  const double mid_intensity = mean_intensity(beam, spec, 0.5 * sum);
  if (g2 > 0.0) {
    out.shot = mid_intensity * std::exp(-d.norm_sq() / w) / (M_PI * w);
    out.total = out.shot + out.classical;
  } else {
    out.shot = mid_intensity;  // delta weight, not a pointwise value
    out.total = out.classical;
  }
  return out;
}

}  // namespace

double shot_kernel(const BeamParams& beam, const DiffuserParams& diff, Vec2 rA,
                   Vec2 rB) {
  beam.validate();
  diff.validate();
  if (!(diff.g2 > 0.0))
    throw ConfigError("shot_kernel: needs g2 > 0 (g2 = 0 is delta-correlated)");
  double w = beam.r0 * beam.r0 - r1_squared(beam.r0, diff.g2);
  return std::exp(-(rA - rB).norm_sq() / w) / (M_PI * w);
}

CorrelationDecomposition correlation_no_diffuser(const BeamParams& beam,
                                                 const SpectrumModel& spec,
                                                 Vec2 rA, Vec2 rB) {
  return correlation_impl(beam, spec, 0.0, rA, rB);
}

CorrelationDecomposition correlation_with_diffuser(const BeamParams& beam,
                                                   const SpectrumModel& spec,
                                                   const DiffuserParams& diff,
                                                   Vec2 rA, Vec2 rB) {
  diff.validate();
  return correlation_impl(beam, spec, diff.g2, rA, rB);
}

double suppression_factor(const BeamParams& beam, const SpectrumModel& spec,
                          const DiffuserParams& diff) {
  beam.validate();
  diff.validate();
  Moments m = moments(beam, spec);
  double w = beam.r0 * beam.r0 - r1_squared(beam.r0, diff.g2);
  return std::exp(-m.q2_mean * w / 4.0);
}

double suppression_ratio_exact(const BeamParams& beam, const SpectrumModel& spec,
                               const DiffuserParams& diff) {
  beam.validate();
  diff.validate();
  Moments m = moments(beam, spec);
  double w = beam.r0 * beam.r0 - r1_squared(beam.r0, diff.g2);
  return 1.0 / (1.0 + m.q2_mean * w / 8.0);
}

namespace {

// Intersection area of two radius-R disks with centers a distance d apart.
double disk_overlap(double d, double R) {
  if (d >= 2.0 * R) return 0.0;
  return 2.0 * R * R * std::acos(d / (2.0 * R)) -
         0.5 * d * std::sqrt(4.0 * R * R - d * d);
}

}  // namespace

double scintillation_index(const BeamParams& beam, const SpectrumModel& spec,
                           const std::optional<DiffuserParams>& diff, Vec2 r,
                           bool include_shot, double detector_area) {
  beam.validate();
  if (diff) diff->validate();
  Moments m = moments(beam, spec);
  double g2 = diff ? diff->g2 : 0.0;
  double w = beam.r0 * beam.r0 - r1_squared(beam.r0, g2);
  // Classical ratio <dI dI>(r,r)/<I(r)>^2: the Gaussian profiles cancel
  // algebraically, leaving only the diffuser suppression.
  double sigma2 = 1.0 / (1.0 + m.q2_mean * w / 8.0);
  if (!include_shot) return sigma2;

  if (!(detector_area > 0.0))
    throw ConfigError("scintillation_index: shot term needs detector_area > 0");
  double mean_i = mean_intensity(beam, spec, r);
  double kernel_mass;  // Int over detector x detector of the shot kernel
  if (g2 > 0.0) {
    double radius = std::sqrt(detector_area / M_PI);
    auto f = [w, radius](double d) {
      return 2.0 * M_PI * d * std::exp(-d * d / w) / (M_PI * w) *
             disk_overlap(d, radius);
    };
    kernel_mass = integrate_radial(f, 0.0, 2.0 * radius, 1e-8, 20000).value;
  } else {
    kernel_mass = detector_area;
  }
  sigma2 += kernel_mass / (mean_i * detector_area * detector_area);
  return sigma2;
}

double correlation_classical_quadrature(const BeamParams& beam,
                                        const SpectrumModel& spec, double g2,
                                        Vec2 rA, Vec2 rB, int order) {
  beam.validate();
  if (!(g2 >= 0.0)) throw ConfigError("correlation quadrature: g2 must be >= 0");
  const CollisionConstants cc = collision_constants(spec, beam.omega0());
  const double t = beam.time;
  if (!(t > 0.0) || !(cc.alpha > 0.0))
    throw RegimeError("correlation quadrature: undefined at t = 0");
  const double c = kSpeedOfLight;
  const double q0 = beam.q0();
  const double q2 = 4.0 * cc.alpha * t;
  const double r2 = 4.0 * cc.alpha * c * c * t * t * t / (3.0 * q0 * q0);
  const double C = beam.n_photons / (4.0 * M_PI * M_PI * kNormArea);
  const double pref_lin = 2.0 * M_PI * q0 / (c * t * t * cc.alpha);
  const double pref = 3.0 * C * pref_lin * pref_lin;
  const double beta = c * t / (2.0 * q0);
  const double w = beam.r0 * beam.r0 - r1_squared(beam.r0, g2);
  const Vec2 mid = 0.5 * (rA + rB);
  const Vec2 d = rA - rB;

  auto drift_gauss = [&](Vec2 q) {
    return std::exp(-4.0 * (mid - beta * q).norm_sq() / r2);
  };
  // Integrate in center-of-mass / difference coordinates Q = (q + q1)/2,
  // u = q - q1 (Jacobian 1): q^2 + q1^2 = 2 Q^2 + u^2/2, so the coherence
  // kernel exp(-w u^2/4), which can be orders of magnitude narrower than the
  // momentum spread, is absorbed into the Hermite weight instead of being
  // sampled as a spike. The remaining integrand is bounded by 1.
  const double sigma_q = 0.5 * std::sqrt(q2);            // exp(-2 Q^2 / q2)
  const double sigma_u = 1.0 / std::sqrt(1.0 / q2 + w / 2.0);
  // |integrand| <= 1, so contributions below these absolute scales cannot
  // matter; without the floors a far-tail outer node can hand the inner rule
  // an integral that underflows to 0 and fails a purely relative check.
  const double inner_floor = 1e-14 * 2.0 * M_PI * sigma_u * sigma_u;
  const double outer_floor = inner_floor * 2.0 * M_PI * sigma_q * sigma_q * 1e-2;
  auto outer = [&](double Qx, double Qy) {
    Vec2 Q{Qx, Qy};
    auto inner = [&](double ux, double uy) {
      Vec2 u{ux, uy};
      return std::cos(u.dot(d)) * drift_gauss(Q + 0.5 * u) *
             drift_gauss(Q - 0.5 * u);
    };
    return integrate_gauss_weighted_2d(inner, sigma_u, order, 1e-5, inner_floor);
  };
  // Borderline oscillatory cases can miss the doubling check at the
  // requested order; escalate before giving up.
  double val = 0.0;
  for (int attempt = 0;; ++attempt) {
    try {
      val = integrate_gauss_weighted_2d(outer, sigma_q, order, 1e-5, outer_floor);
      break;
    } catch (const NumericalError&) {
      if (attempt >= 2) throw;
      order = order * 3 / 2;
    }
  }
  double two_pi_4 = std::pow(2.0 * M_PI, 4);
  return pref * pref * val / two_pi_4;
}

}  // namespace turbeam
