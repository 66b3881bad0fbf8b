#pragma once

#include <utility>
#include <vector>

#include "turbeam/interp.hpp"
#include "turbeam/vec2.hpp"

namespace turbeam {

enum class SpectrumKind { Gaussian, VonKarman, Tabulated };

// Turbulence refraction-index spectral density psi(k_perp), units m^3.
// The overall amplitude A absorbs the box volume and |n_k|^2 normalization;
// it is the single knob that sets the collision rate. No Cn^2 calibration is
// attempted: A scales nu and alpha linearly, and every law downstream is
// scale-free in it.
class SpectrumModel {
 public:
  // A * exp(-k^2 l^2 / 4). The reference model: nu, alpha and the collision
  // kernel gamma all have closed forms, used as oracles for the quadrature
  // paths.
  static SpectrumModel gaussian(double amplitude, double corr_length);

  // A * (k^2 + 1/L0^2)^(-p/2) * exp(-k^2 l0^2). Community-standard power law
  // with outer/inner-scale cutoffs; default exponent 11/3.
  static SpectrumModel von_karman(double amplitude, double outer_scale,
                                  double inner_scale, double exponent = 11.0 / 3.0);

  // Monotone-cubic interpolation through (k, psi) samples, zero beyond the
  // last sample, clamped to the first value below the first sample.
  static SpectrumModel tabulated(std::vector<std::pair<double, double>> samples);

  SpectrumKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double corr_length() const { return corr_length_; }
  double outer_scale() const { return outer_scale_; }
  double inner_scale() const { return inner_scale_; }
  double exponent() const { return exponent_; }

  // psi(k), k >= 0.
  double psi(double k) const;

  // k beyond which k^2 psi(k) is below 1e-12 of its peak; quadratures stop here.
  double k_cutoff() const { return k_cutoff_; }

 private:
  SpectrumModel() = default;

  SpectrumKind kind_ = SpectrumKind::Gaussian;
  double amplitude_ = 0.0;
  double corr_length_ = 0.0;
  double outer_scale_ = 0.0;
  double inner_scale_ = 0.0;
  double exponent_ = 0.0;
  std::vector<std::pair<double, double>> samples_;
  MonotoneCubic table_;
  double k_cutoff_ = 0.0;
};

struct CollisionConstants {
  double nu = 0.0;     // total collision rate, 1/s
  double alpha = 0.0;  // momentum-diffusion rate constant, 1/(m^2 s)
};

// nu = (2 pi w0^2 / c) Int d^2k psi(k). Gaussian model uses the closed form
// 8 pi^2 w0^2 A / (c l^2); other models use adaptive radial quadrature.
double collision_nu(const SpectrumModel& model, double omega0);

// alpha = (pi w0^2 / 2c) Int d^2k k^2 psi(k). Gaussian closed form: nu / l^2.
double collision_alpha(const SpectrumModel& model, double omega0);

CollisionConstants collision_constants(const SpectrumModel& model, double omega0);

enum class GammaMode { Exact, Diffusive };

// Collision kernel gamma at argument vector p - k c t / q0.
// Exact: (4 pi w0^2 / c) Int d^2k' psi(k') sin^2[(p - k c t / q0) . k' / 2],
// which for the Gaussian model is nu (1 - exp(-u^2/l^2)).
// Diffusive: the small-argument form alpha u^2.
double gamma_rate(const SpectrumModel& model, double omega0, Vec2 k, Vec2 p,
                  double t, double q0, GammaMode mode);

// Same kernel as a function of the scalar argument u = |p - k c t / q0|.
double gamma_rate_scalar(const SpectrumModel& model, double omega0, double u,
                         GammaMode mode);

}  // namespace turbeam
