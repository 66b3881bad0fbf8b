#include "turbeam/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <vector>

#include "turbeam/constants.hpp"
#include "turbeam/errors.hpp"
#include "turbeam/interp.hpp"

namespace turbeam {

namespace {

RegimeStatus grade_above(double v, double pass, double warn) {
  if (v > pass) return RegimeStatus::Pass;
  if (v > warn) return RegimeStatus::Warn;
  return RegimeStatus::Fail;
}

RegimeStatus grade_below(double v, double pass, double warn) {
  if (v < pass) return RegimeStatus::Pass;
  if (v < warn) return RegimeStatus::Warn;
  return RegimeStatus::Fail;
}

}  // namespace

Moments moments(const BeamParams& beam, const SpectrumModel& spec,
                const RegimeThresholds& thr) {
  beam.validate();
  const CollisionConstants cc = collision_constants(spec, beam.omega0());
  const double q0 = beam.q0();
  const double ct = beam.distance();
  Moments m;
  m.nu_t = cc.nu * beam.time;
  m.q2_mean = 4.0 * cc.alpha * beam.time;
  m.r2_mean = 4.0 * cc.alpha * ct * ct * beam.time / (3.0 * q0 * q0);
  m.a2 = m.r2_mean > 0.0 ? M_PI * m.r2_mean / beam.n_photons : 0.0;
  m.saturated = m.nu_t > thr.saturated_pass;
  m.paraxial = m.q2_mean / (q0 * q0) < thr.paraxial_pass;
  m.broadened = m.r2_mean * m.q2_mean / 4.0 > thr.broadened_pass;
  return m;
}

RegimeReport regime_check(const BeamParams& beam, const SpectrumModel& spec,
                          const RegimeThresholds& thr) {
  Moments m = moments(beam, spec, thr);
  const double q0 = beam.q0();
  RegimeReport rep;
  rep.nu_t = m.nu_t;
  rep.broadening_ratio = m.r2_mean * m.q2_mean / 4.0;
  rep.paraxial_ratio = m.q2_mean / (q0 * q0);
  rep.saturated = grade_above(rep.nu_t, thr.saturated_pass, thr.saturated_warn);
  rep.broadened =
      grade_above(rep.broadening_ratio, thr.broadened_pass, thr.broadened_warn);
  rep.paraxial = grade_below(rep.paraxial_ratio, thr.paraxial_pass, thr.paraxial_warn);
  return rep;
}

double mean_pdf_asymptotic(const BeamParams& beam, const SpectrumModel& spec,
                           Vec2 r, Vec2 q) {
  beam.validate();
  const CollisionConstants cc = collision_constants(spec, beam.omega0());
  const double t = beam.time;
  if (!(t > 0.0) || !(cc.alpha > 0.0))
    throw RegimeError("mean_pdf_asymptotic: undefined at t = 0 or without turbulence");
  const double nut = cc.nu * t;
  if (nut <= 10.0)
    std::cerr << "warning: mean_pdf_asymptotic called at nu t = " << nut
              << "; the saturated-regime form assumes nu t >> 1\n";
  const double c = kSpeedOfLight;
  const double q0 = beam.q0();
  const double q2m = 4.0 * cc.alpha * t;
  const double r2m = 4.0 * cc.alpha * c * c * t * t * t / (3.0 * q0 * q0);
  const double C = beam.n_photons / (4.0 * M_PI * M_PI * kNormArea);
  const double pref = 2.0 * M_PI * q0 / (c * t * t * cc.alpha);
  Vec2 shift = r - (c * t / (2.0 * q0)) * q;
  return 3.0 * C * pref * pref *
         std::exp(-4.0 * shift.norm_sq() / r2m - q.norm_sq() / q2m);
}

double mean_intensity(const BeamParams& beam, const SpectrumModel& spec, Vec2 r) {
  Moments m = moments(beam, spec);
  if (!(m.r2_mean > 0.0))
    throw RegimeError("mean_intensity: undefined at t = 0 or without turbulence");
  return beam.n_photons / (M_PI * m.r2_mean) * std::exp(-r.norm_sq() / m.r2_mean);
}

namespace {

// One point of the general-solution integral
//   f(r,q,t) = C Int d2k d2p cos(k.u + q.p)
//              exp(-k^2 r0^2/8 - p^2/(2 r0^2)) exp(-G(k,p,t)),
// u = r - q c t/q0, G = Int_0^t gamma(|p - k c s/q0|) ds.
// The never-scattered piece exp(-nu t) is split off: exp(-G) = exp(-nu t)
// (1 + expm1(R)) with R = Int_0^t [nu - gamma] ds, which is supported only on
// the "tube" |p - k c s/q0| ~ l around the drift segment. The free part
// integrates in closed form; the residual lives on a finite, cheap domain.
class ExactPdfIntegrator {
 public:
  ExactPdfIntegrator(const BeamParams& beam, const SpectrumModel& spec,
                     const QuadratureSettings& settings)
      : beam_(beam), spec_(spec), settings_(settings) {
    cc_ = collision_constants(spec, beam.omega0());
    t_ = beam.time;
    q0_ = beam.q0();
    nut_ = cc_.nu * t_;
    l_ = std::sqrt(cc_.nu / cc_.alpha);  // Gaussian model: corr_length
    gauss_ = spec.kind() == SpectrumKind::Gaussian;
    u_chi_ = l_ * std::sqrt(28.0 + std::log(std::max(nut_, 1.0)));
    if (gauss_) {
      lam_ = std::sqrt(M_PI) * l_;
    } else {
      build_residual_table();
    }
    const double c = kSpeedOfLight;
    const double r0 = beam.r0;
    r2m_ = 4.0 * cc_.alpha * c * c * t_ * t_ * t_ / (3.0 * q0_ * q0_);
    double k_init = std::sqrt(8.0 * 28.0) / r0;
    double k_tube = cc_.nu * lam_ * q0_ / (c * std::max(nut_ - 26.0, 3.0));
    double k_core = 16.0 / std::sqrt(r2m_);
    K_ = std::min(k_init, std::max(k_core, k_tube));
    P0_ = r0 * std::sqrt(56.0);
  }

  double residual(Vec2 r, Vec2 q, double boost) const {
    const double c = kSpeedOfLight;
    Vec2 u = r - (c * t_ / q0_) * q;
    double sig_k = 2.83 / std::sqrt(r2m_);
    auto k_nodes = [&](double u_axis) {
      double n = 0.35 * 2.0 * K_ * u_axis + 2.6 * 2.0 * K_ / sig_k +
                 6.0 * K_ * c * t_ / (l_ * q0_) + 12.0;
      return std::clamp(static_cast<int>(std::ceil(n * boost)), 8, 700);
    };
    int n_kx = k_nodes(std::abs(u.x));
    bool sym_y = (r.y == 0.0 && q.y == 0.0);
    int n_ky = k_nodes(std::abs(u.y));
    if (sym_y) n_ky = std::max(6, (n_ky + 1) / 2);

    const GaussRule& rkx = gauss_legendre(n_kx);
    const GaussRule& rky = gauss_legendre(n_ky);
    double total = 0.0;
    for (int ix = 0; ix < n_kx; ++ix) {
      double kx = K_ * rkx.x[ix];
      double wkx = K_ * rkx.w[ix];
      for (int iy = 0; iy < n_ky; ++iy) {
        double ky, wky;
        if (sym_y) {
          ky = 0.5 * K_ * (1.0 + rky.x[iy]);
          wky = 2.0 * 0.5 * K_ * rky.w[iy];
        } else {
          ky = K_ * rky.x[iy];
          wky = K_ * rky.w[iy];
        }
        Vec2 k{kx, ky};
        total += wkx * wky * p_integral(k, k.dot(u), q, boost);
      }
    }
    return total;
  }

 private:
  void build_residual_table() {
    // nu - gamma(u) for generic spectra, tabulated once; zero past the tail.
    const int n = 512;
    double umax = u_chi_ * 1.3 + 2.0 * l_;
    std::vector<double> xs(n), ys(n);
    double omega0 = beam_.omega0();
    for (int i = 0; i < n; ++i) {
      double uu = umax * i / (n - 1.0);
      xs[i] = uu;
      ys[i] = std::max(0.0, cc_.nu - gamma_rate_scalar(spec_, omega0, uu,
                                                       GammaMode::Exact));
    }
    // trapezoid line integral across the tube, (2/nu) Int_0^inf (nu - gamma)
    double line = 0.0;
    for (int i = 0; i + 1 < n; ++i)
      line += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
    lam_ = 2.0 * line / cc_.nu;
    table_umax_ = umax;
    residual_table_.emplace(std::move(xs), std::move(ys));
  }

  double residual_rate(double uu) const {
    if (uu >= table_umax_) return 0.0;
    return (*residual_table_)(uu);
  }

  // Int over p of cos(phi_k + q.p) exp(-p^2/(2 r0^2)) expm1(R(k,p)), in the
  // tube-aligned frame (p_par along k, p_perp across; integrand even in
  // p_perp so that axis folds to [0, max]).
  double p_integral(Vec2 k, double phi_k, Vec2 q, double boost) const {
    const double c = kSpeedOfLight;
    const double r0 = beam_.r0;
    double kn = k.norm();
    double w = kn * c / q0_;
    Vec2 khat = kn > 0.0 ? (1.0 / kn) * k : Vec2{1.0, 0.0};
    Vec2 kperp{-khat.y, khat.x};
    double qpar = q.dot(khat);
    double qperp = q.dot(kperp);
    double wt = w * t_;
    bool degenerate = wt < 1e-9 * l_;
    double c0 = degenerate ? nut_ : 0.5 * cc_.nu * lam_ / w;
    double red_max = std::min(nut_, 2.0 * c0);

    double lo = std::max(-u_chi_, -P0_);
    double hi = std::min(wt + u_chi_, P0_);
    if (!(hi > lo)) return 0.0;
    // exp(R) near the tube varies on scale l / sqrt(R); size the rule for the
    // sharpest realized exposure
    int n_par = std::clamp(
        static_cast<int>(std::ceil(
            boost * (0.35 * (hi - lo) * std::abs(qpar) +
                     2.2 * (hi - lo) * std::sqrt(1.0 + red_max) / l_ + 10.0))),
        6, 1200);
    const GaussRule& rpar = gauss_legendre(n_par);

    double perp_max = std::min(u_chi_, P0_);
    double p_c = std::min(perp_max, l_ * (4.0 / std::sqrt(1.0 + red_max) + 0.25));
    auto perp_nodes = [&](double a, double b, double scale) {
      double n = 0.35 * (b - a) * std::abs(qperp) + 2.2 * (b - a) / scale + 8.0;
      return std::clamp(static_cast<int>(std::ceil(n * boost)), 4, 500);
    };
    std::vector<double> pp, fw;  // perp nodes and folded weights
    auto add_panel = [&](double a, double b, double scale) {
      if (!(b > a)) return;
      int n = perp_nodes(a, b, scale);
      const GaussRule& rule = gauss_legendre(n);
      for (int j = 0; j < n; ++j) {
        double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.x[j];
        double wj = 0.5 * (b - a) * rule.w[j];
        pp.push_back(x);
        fw.push_back(2.0 * wj * std::cos(qperp * x) *
                     std::exp(-0.5 * x * x / (r0 * r0)));
      }
    };
    add_panel(0.0, p_c, l_ / std::sqrt(1.0 + red_max));
    add_panel(p_c, perp_max, 0.5 * l_);
    std::size_t n_perp = pp.size();
    std::vector<double> X(n_perp);
    for (std::size_t j = 0; j < n_perp; ++j)
      X[j] = std::exp(-pp[j] * pp[j] / (l_ * l_));

    double acc = 0.0;
    for (int i = 0; i < n_par; ++i) {
      double ppar = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rpar.x[i];
      double wi = 0.5 * (hi - lo) * rpar.w[i];
      double gi = std::exp(-0.5 * ppar * ppar / (r0 * r0));
      double ci = std::cos(phi_k + qpar * ppar);
      double si = 0.0;
      if (gauss_) {
        double bi = degenerate
                        ? nut_ * std::exp(-ppar * ppar / (l_ * l_))
                        : c0 * (std::erf(ppar / l_) - std::erf((ppar - wt) / l_));
        for (std::size_t j = 0; j < n_perp; ++j)
          si += fw[j] * std::expm1(bi * X[j]);
      } else {
        for (std::size_t j = 0; j < n_perp; ++j)
          si += fw[j] * std::expm1(residual_exposure(pp[j], ppar, w, wt, degenerate));
      }
      acc += wi * gi * ci * si;
    }
    return acc;
  }

  // R(k,p) = Int_0^t [nu - gamma(|p - k c s/q0|)] ds for generic spectra,
  // reduced to a line integral along the tube axis.
  double residual_exposure(double pperp, double ppar, double w, double wt,
                           bool degenerate) const {
    double p2 = pperp * pperp + ppar * ppar;
    if (degenerate) return residual_rate(std::sqrt(p2)) * t_;
    double xlo = std::max(ppar - wt, -table_umax_);
    double xhi = std::min(ppar, table_umax_);
    if (!(xhi > xlo)) return 0.0;
    int n = std::clamp(static_cast<int>(std::ceil(6.0 * (xhi - xlo) / l_)) + 8, 8, 128);
    const GaussRule& rule = gauss_legendre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = 0.5 * (xlo + xhi) + 0.5 * (xhi - xlo) * rule.x[i];
      sum += rule.w[i] * residual_rate(std::sqrt(pperp * pperp + x * x));
    }
    return 0.5 * (xhi - xlo) * sum / w;
  }

  const BeamParams& beam_;
  const SpectrumModel& spec_;
  const QuadratureSettings& settings_;
  CollisionConstants cc_;
  double t_ = 0.0, q0_ = 0.0, nut_ = 0.0, l_ = 0.0, lam_ = 0.0;
  double r2m_ = 0.0, K_ = 0.0, P0_ = 0.0, u_chi_ = 0.0;
  bool gauss_ = true;
  std::optional<MonotoneCubic> residual_table_;
  double table_umax_ = 0.0;
};

}  // namespace

double mean_pdf_exact(const BeamParams& beam, const SpectrumModel& spec, Vec2 r,
                      Vec2 q, const QuadratureSettings& settings) {
  beam.validate();
  settings.validate();
  const double c = kSpeedOfLight;
  const double q0 = beam.q0();
  const double t = beam.time;
  const double r0 = beam.r0;
  const double C = beam.n_photons / (4.0 * M_PI * M_PI * kNormArea);
  const Vec2 u = r - (c * t / q0) * q;
  const double f_free =
      16.0 * M_PI * M_PI *
      std::exp(-2.0 * u.norm_sq() / (r0 * r0) - 0.5 * q.norm_sq() * r0 * r0);
  const CollisionConstants cc = collision_constants(spec, beam.omega0());
  const double nut = cc.nu * t;
  if (nut < 1e-12) return C * std::exp(-nut) * f_free;

  ExactPdfIntegrator integ(beam, spec, settings);
  double res = integ.residual(r, q, 1.0);
  if (settings.check_convergence) {
    double fine = integ.residual(r, q, 1.35);
    double scale = std::max(std::abs(f_free + fine), 1e-12);
    if (std::abs(fine - res) > settings.rel_tol_4d * scale)
      throw NumericalError(
          "mean_pdf_exact: residual quadrature did not converge under node "
          "refinement",
          C * std::exp(-nut) * (f_free + fine),
          C * std::exp(-nut) * std::abs(fine - res));
    res = fine;
  }
  return C * std::exp(-nut) * (f_free + res);
}

}  // namespace turbeam
