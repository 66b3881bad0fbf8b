#pragma once

#include "turbeam/beam.hpp"
#include "turbeam/quadrature.hpp"
#include "turbeam/spectrum.hpp"
#include "turbeam/vec2.hpp"

namespace turbeam {

enum class RegimeStatus { Pass, Warn, Fail };

struct RegimeThresholds {
  double saturated_pass = 10.0;  // nu t above this: saturated
  double saturated_warn = 1.0;
  double paraxial_pass = 0.01;   // <q^2>/q0^2 below this: paraxial
  double paraxial_warn = 0.1;
  double broadened_pass = 10.0;  // <r^2><q^2>/4 above this: beam well broadened
  double broadened_warn = 1.0;
};

// Saturated-regime moments of the mean PDF.
struct Moments {
  double r2_mean = 0.0;  // <r^2> = 4 alpha c^2 t^3 / (3 q0^2), m^2
  double q2_mean = 0.0;  // <q^2> = 4 alpha t, 1/m^2
  double a2 = 0.0;       // area per particle pi <r^2> / N, m^2
  double nu_t = 0.0;
  bool saturated = false;
  bool paraxial = false;
  bool broadened = false;
};

struct RegimeReport {
  double nu_t = 0.0;
  double broadening_ratio = 0.0;  // <r^2><q^2>/4
  double paraxial_ratio = 0.0;    // <q^2>/q0^2
  RegimeStatus saturated = RegimeStatus::Fail;
  RegimeStatus broadened = RegimeStatus::Fail;
  RegimeStatus paraxial = RegimeStatus::Pass;
};

Moments moments(const BeamParams& beam, const SpectrumModel& spec,
                const RegimeThresholds& thr = {});

RegimeReport regime_check(const BeamParams& beam, const SpectrumModel& spec,
                          const RegimeThresholds& thr = {});

// Saturated-regime mean PDF (closed form): prefactor
// 3C (2 pi q0 / (c t^2 alpha))^2 with C = N / (4 pi^2 S), times
// exp[-(r - q c t / (2 q0))^2 * 4/<r^2> - q^2/<q^2>].
// Note the q^2 coefficient: 1/<q^2> is the value consistent with
// <q^2> = 4 alpha t and with the correlation/intensity closed forms, and it
// is what the general quadrature tier converges to.
// Throws RegimeError at t = 0; warns (stderr) when unsaturated.
double mean_pdf_asymptotic(const BeamParams& beam, const SpectrumModel& spec,
                           Vec2 r, Vec2 q);

// General-solution quadrature tier: the 4D integral over (k, p) of
// exp(-i k.r - i q.(p - k c t/q0)) exp(-k^2 r0^2/8 - p^2/(2 r0^2))
// exp(-Int_0^t gamma dt'), normalized by C = N/(4 pi^2 S).
// The never-scattered component exp(-nu t) * (free-space closed form) is
// peeled off analytically; the remainder is integrated on decay-fitted
// finite domains with oscillation-resolving Gauss-Legendre tensor grids.
double mean_pdf_exact(const BeamParams& beam, const SpectrumModel& spec, Vec2 r,
                      Vec2 q, const QuadratureSettings& settings = {});

// Saturated mean photon areal density N/(pi <r^2>) exp(-r^2/<r^2>) = (1/a^2) e^...
// Throws RegimeError at t = 0.
double mean_intensity(const BeamParams& beam, const SpectrumModel& spec, Vec2 r);

}  // namespace turbeam
