#pragma once

#include <optional>

#include "turbeam/beam.hpp"
#include "turbeam/meanfield.hpp"
#include "turbeam/spectrum.hpp"
#include "turbeam/vec2.hpp"

namespace turbeam {

// Phase-diffuser strength: <g^2> is the per-axis variance of the random
// phase gradient at the transmitter aperture.
struct DiffuserParams {
  double g2 = 0.0;  // 1/m^2

  void validate() const {
    if (!(g2 >= 0.0)) throw ConfigError("diffuser.g2 must be >= 0");
  }
};

// r1^2 = r0^2 / (1 + r0^2 <g^2>): diffuser-reduced coherence radius squared.
double r1_squared(double r0, double g2);

// Photon-density correlation at a point pair, split into its shot and
// quasiclassical parts.
//
// The shot part of the correlation is a kernel in rA - rB times the mean
// intensity at the midpoint. Without a diffuser the kernel is a delta
// function: `shot` is then the delta WEIGHT <I(mid)> (units photons/m^2),
// kernel_width_sq = 0, and the shot part is never added pointwise to
// `total`. With a diffuser the kernel is a normalized Gaussian of width^2
// r0^2 - r1^2, the shot part has a pointwise value, and `total` includes it.
struct CorrelationDecomposition {
  double shot = 0.0;
  double classical = 0.0;
  double total = 0.0;
  double kernel_width_sq = 0.0;  // r0^2 - r1^2; 0 means delta-correlated
};

// Broadened shot-noise kernel (1/(pi w2)) exp(-(rA-rB)^2 / w2) with
// w2 = r0^2 - r1^2. Requires g2 > 0; the g2 = 0 case is the delta branch.
double shot_kernel(const BeamParams& beam, const DiffuserParams& diff, Vec2 rA,
                   Vec2 rB);

CorrelationDecomposition correlation_no_diffuser(const BeamParams& beam,
                                                 const SpectrumModel& spec,
                                                 Vec2 rA, Vec2 rB);

CorrelationDecomposition correlation_with_diffuser(const BeamParams& beam,
                                                   const SpectrumModel& spec,
                                                   const DiffuserParams& diff,
                                                   Vec2 rA, Vec2 rB);

// The moderate-diffuser estimate exp[-<q^2>(r0^2 - r1^2)/4] of the
// quasiclassical suppression. Reported alongside the closed form, which
// gives the exact center-beam ratio 1 / (1 + <q^2>(r0^2-r1^2)/8).
double suppression_factor(const BeamParams& beam, const SpectrumModel& spec,
                          const DiffuserParams& diff);

// Exact center-beam classical suppression ratio from the closed form.
double suppression_ratio_exact(const BeamParams& beam, const SpectrumModel& spec,
                               const DiffuserParams& diff);

// sigma^2 = <(dI)^2>/<I>^2. Without diffuser and shot this is identically 1.
// include_shot adds the detector-regularized shot contribution: the shot
// kernel is integrated over a disk detector of the given area centered at r,
// divided by (<I(r)> * area)^2.
double scintillation_index(const BeamParams& beam, const SpectrumModel& spec,
                           const std::optional<DiffuserParams>& diff, Vec2 r,
                           bool include_shot = false, double detector_area = 0.0);

// Validation oracle: direct double-q tensor quadrature of the classical term
// (the sum over q, q1 of <f><f> with the diffuser coupling factor), kept
// independent of the closed form above. Used behind --validate and in tests.
double correlation_classical_quadrature(const BeamParams& beam,
                                        const SpectrumModel& spec, double g2,
                                        Vec2 rA, Vec2 rB, int order = 48);

}  // namespace turbeam
