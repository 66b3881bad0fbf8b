#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "turbeam/beam.hpp"
#include "turbeam/interp.hpp"
#include "turbeam/rng.hpp"
#include "turbeam/spectrum.hpp"
#include "turbeam/vec2.hpp"

namespace turbeam {

enum class InitialWidthMode { PointSource, GaussianWaist, DiffuserWaist };

struct McConfig {
  std::int64_t n_photons = 100000;
  std::uint64_t seed = 1;
  std::vector<double> record_times;            // strictly increasing, s
  std::int64_t max_events_per_photon = 0;      // 0: auto (10x expected + slack)
  InitialWidthMode initial_width_mode = InitialWidthMode::PointSource;
  double g2 = 0.0;                             // DiffuserWaist momentum spread
  int histogram_bins = 0;                      // 0: no histogram
  double histogram_rmax = 0.0;                 // 0: auto (6 sqrt(<r^2>) at t_max)
  int n_threads = 1;

  void validate() const;
};

struct McRecord {
  double t = 0.0;
  double mean_q2 = 0.0, stderr_q2 = 0.0;  // 1/m^2
  double mean_r2 = 0.0, stderr_r2 = 0.0;  // m^2
  double mean_rq = 0.0, stderr_rq = 0.0;  // <r.q>, dimensionless
};

struct RadialHistogram {
  std::vector<double> bin_edges;  // size bins+1, m
  std::vector<double> counts;     // photons per bin (overflow photons beyond rmax excluded)
  std::vector<double> stderr_counts;
  double overflow = 0.0;
};

struct McEstimate {
  std::int64_t n_photons = 0;
  std::vector<McRecord> records;
  std::vector<RadialHistogram> histograms;  // one per record time when enabled

  std::string to_csv() const;       // one row per record time
  std::string to_json() const;      // 17-significant-digit numbers
  std::string histogram_csv(std::size_t t_index) const;
};

// Per-bin comparison of an MC radial histogram against the saturated mean
// intensity profile.
struct IntensityComparison {
  std::vector<double> bin_centers;
  std::vector<double> density;          // photons/m^2, MC estimate
  std::vector<double> density_stderr;
  std::vector<double> expected_density; // from mean_intensity
  std::vector<double> z_scores;
};

// Draws one transverse momentum kick: isotropic direction, radius from the
// normalized density 2 pi k psi(k) / Int. Gaussian spectra use the exact
// inverse CDF k = (2/l) sqrt(-ln u); other models use a precomputed
// monotone-cubic inverse-CDF table.
class KickSampler {
 public:
  explicit KickSampler(const SpectrumModel& spec);
  Vec2 sample(RngStream& rng) const;

 private:
  bool exact_gaussian_ = false;
  double corr_length_ = 0.0;
  MonotoneCubic inverse_cdf_;  // u in [0,1] -> k
};

Vec2 sample_kick(const KickSampler& sampler, RngStream& rng);

// Event-driven kinetic Monte-Carlo: exponential waiting times with total
// rate nu, free paraxial drift r += (c/q0) q dt between events, kicks from
// the spectrum at events. Photons are independent; results are a
// deterministic pure function of (seed, config) for any thread count
// (per-photon counter-based streams + fixed-order pairwise reduction).
McEstimate simulate_photons(const BeamParams& beam, const SpectrumModel& spec,
                            const McConfig& cfg);

IntensityComparison estimate_intensity_profile(const BeamParams& beam,
                                               const SpectrumModel& spec,
                                               const McEstimate& estimate,
                                               std::size_t t_index);

}  // namespace turbeam
