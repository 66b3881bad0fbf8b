#include "turbeam/spectrum.hpp"

#include <cmath>
#include <sstream>

#include "turbeam/constants.hpp"
#include "turbeam/errors.hpp"
#include "turbeam/quadrature.hpp"

namespace turbeam {

namespace {

// Geometric scan for the k beyond which k^2 psi(k) has dropped below 1e-12 of
// its peak. Doubles as the convergence check for Int d^2k k^2 psi.
double find_k_cutoff(const SpectrumModel& model, double scale_hint) {
  const double lo = scale_hint * 1e-4;
  const double hi = scale_hint * 1e8;
  const int steps = 4000;
  double ratio = std::pow(hi / lo, 1.0 / steps);
  double peak = 0.0;
  double k = lo;
  for (int i = 0; i <= steps; ++i, k *= ratio) {
    double v = k * k * model.psi(k);
    if (!std::isfinite(v)) throw ConfigError("spectrum: psi(k) not finite");
    if (v > peak) peak = v;
  }
  if (peak == 0.0) return scale_hint;  // zero spectrum
  bool past_peak = false;
  k = lo;
  for (int i = 0; i <= steps; ++i, k *= ratio) {
    double v = k * k * model.psi(k);
    if (v > 0.5 * peak) past_peak = true;
    if (past_peak && v <= 1e-12 * peak) return k;
  }
  throw ConfigError(
      "spectrum: Int d^2k k^2 psi(k) does not converge (no spectral decay "
      "found); check inner scale / exponent / tabulated tail");
}

}  // namespace

SpectrumModel SpectrumModel::gaussian(double amplitude, double corr_length) {
  if (!(amplitude >= 0.0)) throw ConfigError("spectrum.amplitude must be >= 0");
  if (!(corr_length > 0.0)) throw ConfigError("spectrum.corr_length must be > 0");
  SpectrumModel m;
  m.kind_ = SpectrumKind::Gaussian;
  m.amplitude_ = amplitude;
  m.corr_length_ = corr_length;
  // Analytic: k^2 exp(-k^2 l^2/4) falls below 1e-12 of its peak near
  // k l / 2 ~ sqrt(ln 1e12 + ...); keep a margin.
  m.k_cutoff_ = 2.0 * std::sqrt(32.0) / corr_length;
  return m;
}

SpectrumModel SpectrumModel::von_karman(double amplitude, double outer_scale,
                                        double inner_scale, double exponent) {
  if (!(amplitude >= 0.0)) throw ConfigError("spectrum.amplitude must be >= 0");
  if (!(outer_scale > 0.0)) throw ConfigError("spectrum.outer_scale must be > 0");
  if (!(inner_scale >= 0.0)) throw ConfigError("spectrum.inner_scale must be >= 0");
  if (!(exponent > 0.0)) throw ConfigError("spectrum.exponent must be > 0");
  SpectrumModel m;
  m.kind_ = SpectrumKind::VonKarman;
  m.amplitude_ = amplitude;
  m.outer_scale_ = outer_scale;
  m.inner_scale_ = inner_scale;
  m.exponent_ = exponent;
  if (amplitude > 0.0) {
    if (inner_scale == 0.0 && exponent <= 4.0)
      throw ConfigError(
          "spectrum: von Karman with inner_scale = 0 needs exponent > 4 for "
          "Int d^2k k^2 psi to converge");
    double hint = inner_scale > 0.0 ? inner_scale : outer_scale;
    m.k_cutoff_ = find_k_cutoff(m, hint);
  } else {
    m.k_cutoff_ = 1.0 / outer_scale;
  }
  return m;
}

SpectrumModel SpectrumModel::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 4)
    throw ConfigError("spectrum: tabulated model needs at least 4 samples");
  std::vector<double> xs, ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto [k, v] = samples[i];
    if (!(k >= 0.0)) throw ConfigError("spectrum: tabulated k must be >= 0");
    if (i > 0 && !(k > samples[i - 1].first))
      throw ConfigError("spectrum: tabulated k must be strictly increasing");
    if (!std::isfinite(v) || v < 0.0)
      throw ConfigError("spectrum: tabulated psi must be finite and >= 0");
    xs.push_back(k);
    ys.push_back(v);
  }
  SpectrumModel m;
  m.kind_ = SpectrumKind::Tabulated;
  m.samples_ = std::move(samples);
  m.table_ = MonotoneCubic(std::move(xs), std::move(ys));
  m.k_cutoff_ = m.samples_.back().first;  // zero extrapolation: moments stay finite
  double peak = 0.0;
  for (const auto& [k, v] : m.samples_) peak = std::max(peak, v);
  m.amplitude_ = peak;
  return m;
}

double SpectrumModel::psi(double k) const {
  if (!(k >= 0.0)) throw std::invalid_argument("psi: k must be >= 0");
  switch (kind_) {
    case SpectrumKind::Gaussian:
      return amplitude_ * std::exp(-0.25 * k * k * corr_length_ * corr_length_);
    case SpectrumKind::VonKarman: {
      double base = k * k + 1.0 / (outer_scale_ * outer_scale_);
      double v = amplitude_ * std::pow(base, -0.5 * exponent_);
      if (inner_scale_ > 0.0) v *= std::exp(-k * k * inner_scale_ * inner_scale_);
      return v;
    }
    case SpectrumKind::Tabulated:
      if (k >= samples_.back().first) return k == samples_.back().first
                                                  ? samples_.back().second
                                                  : 0.0;
      return std::max(0.0, table_(k));
  }
  return 0.0;
}

double collision_nu(const SpectrumModel& model, double omega0) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("collision_nu: omega0 must be > 0");
  const double pref = 2.0 * M_PI * omega0 * omega0 / kSpeedOfLight;
  if (model.kind() == SpectrumKind::Gaussian) {
    double l = model.corr_length();
    return pref * model.amplitude() * 4.0 * M_PI / (l * l);
  }
  if (model.amplitude() == 0.0) return 0.0;
  auto f = [&model](double k) { return 2.0 * M_PI * k * model.psi(k); };
  IntegralResult r = integrate_radial(f, 0.0, model.k_cutoff(), 1e-8, 100000);
  return pref * r.value;
}

double collision_alpha(const SpectrumModel& model, double omega0) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("collision_alpha: omega0 must be > 0");
  const double pref = M_PI * omega0 * omega0 / (2.0 * kSpeedOfLight);
  if (model.kind() == SpectrumKind::Gaussian) {
    double l = model.corr_length();
    return pref * model.amplitude() * 16.0 * M_PI / (l * l * l * l);
  }
  if (model.amplitude() == 0.0) return 0.0;
  auto f = [&model](double k) { return 2.0 * M_PI * k * k * k * model.psi(k); };
  IntegralResult r = integrate_radial(f, 0.0, model.k_cutoff(), 1e-8, 100000);
  return pref * r.value;
}

CollisionConstants collision_constants(const SpectrumModel& model, double omega0) {
  return {collision_nu(model, omega0), collision_alpha(model, omega0)};
}

double gamma_rate_scalar(const SpectrumModel& model, double omega0, double u,
                         GammaMode mode) {
  if (!(u >= 0.0)) throw std::invalid_argument("gamma_rate: |argument| must be >= 0");
  if (mode == GammaMode::Diffusive) {
    return collision_alpha(model, omega0) * u * u;
  }
  if (model.kind() == SpectrumKind::Gaussian) {
    double nu = collision_nu(model, omega0);
    double l = model.corr_length();
    return nu * (1.0 - std::exp(-u * u / (l * l)));
  }
  if (model.amplitude() == 0.0) return 0.0;
  // (2 pi w0^2/c) [Int d^2k psi - 2 pi Int k psi J0(u k) dk], from
  // sin^2 x = (1 - cos 2x)/2 and the angular average of cos(u.k).
  const double pref = 2.0 * M_PI * omega0 * omega0 / kSpeedOfLight;
  auto f0 = [&model](double k) { return 2.0 * M_PI * k * model.psi(k); };
  double i0 = integrate_radial(f0, 0.0, model.k_cutoff(), 1e-9, 100000).value;
  auto fc = [&model, u](double k) {
    return 2.0 * M_PI * k * model.psi(k) * std::cyl_bessel_j(0.0, u * k);
  };
  double ic = integrate_radial(fc, 0.0, model.k_cutoff(), 1e-9, 200000).value;
  return pref * (i0 - ic);
}

double gamma_rate(const SpectrumModel& model, double omega0, Vec2 k, Vec2 p,
                  double t, double q0, GammaMode mode) {
  if (!(t >= 0.0)) throw std::invalid_argument("gamma_rate: t must be >= 0");
  Vec2 u = p - (kSpeedOfLight * t / q0) * k;
  return gamma_rate_scalar(model, omega0, u.norm(), mode);
}

}  // namespace turbeam
