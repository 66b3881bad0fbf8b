#pragma once

#include "turbeam/beam.hpp"
#include "turbeam/quadrature.hpp"
#include "turbeam/spectrum.hpp"

namespace turbeam {

// Beam-centroid wandering. The classical (four-wave-interference) part
// decays as 1/t while the shot part grows as t^3; crossover_time is where
// they are equal.
struct WanderReport {
  double r2_classical = 0.0;  // 1/(2 alpha t), m^2
  double r2_shot = 0.0;       // <r^2>/N, m^2
  double total = 0.0;
  double crossover_time = 0.0;  // s
};

enum class WanderPart { Classical, Shot };

// Closed forms.
double wander_classical(const BeamParams& beam, const SpectrumModel& spec);
double wander_shot(const BeamParams& beam, const SpectrumModel& spec);
WanderReport wander_report(const BeamParams& beam, const SpectrumModel& spec);

// t* = (3 N q0^2 / (8 alpha^2 c^2))^(1/4).
double wander_crossover_time(const BeamParams& beam, const SpectrumModel& spec);

// Quadrature oracle for the defining centroid integrals: the classical part
// keeps the -(r - r')^2 term the closed form neglects, so it carries the
// full O(4 / (<r^2><q^2>)) correction.
double wander_quadrature(const BeamParams& beam, const SpectrumModel& spec,
                         WanderPart part, const QuadratureSettings& settings = {});

}  // namespace turbeam
