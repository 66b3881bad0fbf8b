#include <cmath>

#include "doctest.h"
#include "turbeam/errors.hpp"
#include "turbeam/mc.hpp"
#include "turbeam/meanfield.hpp"

using namespace turbeam;

namespace {

struct Setup {
  BeamParams beam;
  SpectrumModel spec = SpectrumModel::gaussian(0.0, 0.05);
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
  return s;
}

}  // namespace

TEST_CASE("kick sampler: Gaussian spectrum second moment is 4/l^2") {
  double l = 0.04;
  KickSampler sampler(SpectrumModel::gaussian(1e-20, l));
  RngStream rng(5, 0);
  const int n = 100000;
  double s2 = 0.0, s4 = 0.0, sx = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec2 k = sampler.sample(rng);
    s2 += k.norm_sq();
    s4 += k.norm_sq() * k.norm_sq();
    sx += k.x;
  }
  double mean2 = s2 / n;
  double expect = 4.0 / (l * l);
  double se = std::sqrt((s4 / n - mean2 * mean2) / n);
  CHECK(std::abs(mean2 - expect) <= 4.0 * se);
  // isotropy
  CHECK(std::abs(sx / n) <= 4.0 * std::sqrt(mean2 / 2.0 / n));
}

TEST_CASE("kick sampler: tabulated inverse-CDF path tracks the closed form") {
  double l = 0.04;
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 2000; ++i) {
    double k = 14.0 / l * i / 2000.0;
    samples.emplace_back(k, std::exp(-k * k * l * l / 4.0));
  }
  KickSampler sampler(SpectrumModel::tabulated(std::move(samples)));
  RngStream rng(6, 0);
  const int n = 100000;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) s2 += sampler.sample(rng).norm_sq();
  CHECK(s2 / n == doctest::Approx(4.0 / (l * l)).epsilon(0.02));
}

TEST_CASE("MC reproduces the moment laws within 3 standard errors") {
  Setup s = make_setup();
  McConfig cfg;
  cfg.n_photons = 30000;
  cfg.seed = 11;
  cfg.record_times = {0.5e-3, 1e-3};
  McEstimate est = simulate_photons(s.beam, s.spec, cfg);
  REQUIRE(est.records.size() == 2);

  CollisionConstants cc = collision_constants(s.spec, s.beam.omega0());
  double q0 = s.beam.q0(), c = kSpeedOfLight;
  for (const McRecord& r : est.records) {
    double t = r.t;
    double q2 = 4.0 * cc.alpha * t;
    double r2 = 4.0 * cc.alpha * c * c * t * t * t / (3.0 * q0 * q0);
    double rq = 2.0 * cc.alpha * c * t * t / q0;
    CHECK(std::abs(r.mean_q2 - q2) <= 3.0 * r.stderr_q2);
    CHECK(std::abs(r.mean_r2 - r2) <= 3.0 * r.stderr_r2);
    CHECK(std::abs(r.mean_rq - rq) <= 3.0 * r.stderr_rq);
  }
  // spread grows with time
  CHECK(est.records[0].mean_r2 < est.records[1].mean_r2);
}

TEST_CASE("MC is deterministic in (seed, config), independent of threads") {
  Setup s = make_setup();
  McConfig cfg;
  cfg.n_photons = 9000;
  cfg.seed = 1234;
  cfg.record_times = {1e-3};

  McEstimate a = simulate_photons(s.beam, s.spec, cfg);
  McEstimate b = simulate_photons(s.beam, s.spec, cfg);
  CHECK(a.to_json() == b.to_json());

  McConfig cfg3 = cfg;
  cfg3.n_threads = 3;
  McEstimate c3 = simulate_photons(s.beam, s.spec, cfg3);
  CHECK(a.to_json() == c3.to_json());

  McConfig other = cfg;
  other.seed = 1235;
  CHECK(a.to_json() != simulate_photons(s.beam, s.spec, other).to_json());
}

TEST_CASE("no turbulence: point-source photons never move") {
  Setup s = make_setup();
  auto vacuum = SpectrumModel::gaussian(0.0, 0.05);
  McConfig cfg;
  cfg.n_photons = 500;
  cfg.record_times = {1e-3};
  McEstimate est = simulate_photons(s.beam, vacuum, cfg);
  CHECK(est.records[0].mean_q2 == 0.0);
  CHECK(est.records[0].mean_r2 == 0.0);
  CHECK(est.records[0].mean_rq == 0.0);
}

TEST_CASE("event cap trips SimulationError") {
  Setup s = make_setup(200.0);
  McConfig cfg;
  cfg.n_photons = 200;
  cfg.record_times = {1e-3};
  cfg.max_events_per_photon = 3;  // expect ~200 collisions
  CHECK_THROWS_AS(simulate_photons(s.beam, s.spec, cfg), SimulationError);
}

TEST_CASE("config validation") {
  McConfig cfg;
  cfg.n_photons = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.n_photons = 10;
  cfg.record_times = {2e-3, 1e-3};  // not increasing
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("initial width modes reproduce the aperture statistics") {
  Setup s = make_setup();
  auto vacuum = SpectrumModel::gaussian(0.0, 0.05);
  McConfig cfg;
  cfg.n_photons = 60000;
  cfg.seed = 3;
  cfg.record_times = {1e-9};  // effectively t = 0
  cfg.initial_width_mode = InitialWidthMode::GaussianWaist;
  McEstimate est = simulate_photons(s.beam, vacuum, cfg);
  // aperture field exp(-r^2/r0^2): <r^2> = r0^2/2 per the PDF quadratic form
  double r2 = est.records[0].mean_r2;
  CHECK(std::abs(r2 - s.beam.r0 * s.beam.r0 / 2.0) <=
        4.0 * est.records[0].stderr_r2);

  cfg.initial_width_mode = InitialWidthMode::DiffuserWaist;
  cfg.g2 = 4.0 / (s.beam.r0 * s.beam.r0);
  McEstimate est2 = simulate_photons(s.beam, vacuum, cfg);
  double q2_expect = 2.0 * (1.0 / (s.beam.r0 * s.beam.r0) + cfg.g2);
  CHECK(std::abs(est2.records[0].mean_q2 - q2_expect) <=
        4.0 * est2.records[0].stderr_q2);
}

TEST_CASE("radial histogram matches the saturated intensity profile") {
  Setup s = make_setup();
  McConfig cfg;
  cfg.n_photons = 40000;
  cfg.seed = 21;
  cfg.record_times = {1e-3};
  cfg.histogram_bins = 24;
  McEstimate est = simulate_photons(s.beam, s.spec, cfg);
  REQUIRE(est.histograms.size() == 1);

  IntensityComparison cmp = estimate_intensity_profile(s.beam, s.spec, est, 0);
  int bad = 0, used = 0;
  for (std::size_t b = 0; b < cmp.z_scores.size(); ++b) {
    if (cmp.density_stderr[b] <= 0.0) continue;
    ++used;
    if (std::abs(cmp.z_scores[b]) > 4.0) ++bad;
  }
  CHECK(used >= 10);
  CHECK(bad <= 1);
}
