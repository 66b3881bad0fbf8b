#pragma once

#include <cmath>

#include "turbeam/constants.hpp"
#include "turbeam/errors.hpp"

namespace turbeam {

// Laser/link parameters. The aperture-plane field profile is
// exp(-r^2 / r0^2); q0 = 2 pi / wavelength is the carrier wavenumber and
// z = c t the propagation distance.
struct BeamParams {
  double wavelength = 1.55e-6;  // m
  double r0 = 0.01;             // m, Gaussian waist parameter
  double n_photons = 1.0e6;     // total transverse photon number
  double time = 0.0;            // s

  double q0() const { return 2.0 * M_PI / wavelength; }
  double omega0() const { return kSpeedOfLight * q0(); }
  double distance() const { return kSpeedOfLight * time; }

  static BeamParams from_distance(double wavelength, double r0, double n_photons,
                                  double z) {
    return BeamParams{wavelength, r0, n_photons, z / kSpeedOfLight};
  }

  void validate() const {
    if (!(wavelength > 0.0)) throw ConfigError("beam.wavelength must be > 0");
    if (!(r0 > 0.0)) throw ConfigError("beam.r0 must be > 0");
    if (!(n_photons > 0.0)) throw ConfigError("beam.n_photons must be > 0");
    if (!(time >= 0.0)) throw ConfigError("beam.time must be >= 0");
  }
};

}  // namespace turbeam
