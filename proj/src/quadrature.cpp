#include "turbeam/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "turbeam/errors.hpp"

namespace turbeam {

void QuadratureSettings::validate() const {
  if (!(rel_tol_1d > 0.0 && rel_tol_1d <= 1e-2))
    throw ConfigError("quadrature.rel_tol_1d must be in (0, 1e-2]");
  if (!(rel_tol_4d > 0.0 && rel_tol_4d <= 1e-2))
    throw ConfigError("quadrature.rel_tol_4d must be in (0, 1e-2]");
  if (max_nodes_1d < 8) throw ConfigError("quadrature.max_nodes_1d must be >= 8");
  if (hermite_order < 8) throw ConfigError("quadrature.hermite_order must be >= 8");
  if (!(k_cutoff_factor > 0.0))
    throw ConfigError("quadrature.k_cutoff_factor must be > 0");
}

namespace {

// 15-point Kronrod extension of 7-point Gauss.
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double fc = f(mid);
  double gauss = fc * kGaussW[3];
  double kron = fc * kKronrodW[7];
  for (int i = 0; i < 7; ++i) {
    double dx = half * kKronrodX[i];
    double fsum = f(mid - dx) + f(mid + dx);
    kron += fsum * kKronrodW[i];
    if (i % 2 == 1) gauss += fsum * kGaussW[i / 2];
  }
  gauss *= half;
  kron *= half;
  double err = std::abs(kron - gauss);
  // Standard Kronrod error sharpening.
  err = std::pow(200.0 * err, 1.5);
  double scale = std::abs(kron);
  if (scale > 0.0 && err > scale) err = scale;
  if (err < std::abs(kron - gauss)) err = std::abs(kron - gauss) * 1e-2;
  return {a, b, kron, std::max(err, std::abs(kron - gauss))};
}

}  // namespace

IntegralResult integrate_radial(const std::function<double(double)>& f, double a,
                                double b, double rel_tol, int max_nodes) {
  if (!(b >= a)) throw ConfigError("integrate_radial: domain must have b >= a");
  if (a == b) return {0.0, 0.0};
  std::vector<Segment> segs;
  segs.push_back(gk15(f, a, b));
  int evals = 15;
  double l1 = 0.0;
  auto totals = [&segs, &l1]() {
    double v = 0.0, e = 0.0;
    l1 = 0.0;
    for (const auto& s : segs) {
      v += s.value;
      e += s.error;
      l1 += std::abs(s.value);
    }
    return IntegralResult{v, e};
  };
  while (true) {
    IntegralResult tot = totals();
    // Oscillatory integrands can cancel to ~0; measure convergence against
    // the unsigned segment mass as well as the signed value.
    double tol = rel_tol * std::max(std::abs(tot.value), l1);
    double floor = 1e-300 + rel_tol * 1e-30;
    if (tot.error_bound <= std::max(tol, floor)) return tot;
    if (evals + 30 > max_nodes) {
      std::ostringstream msg;
      msg << "integrate_radial: node budget " << max_nodes
          << " exhausted; best estimate " << tot.value << " with error bound "
          << tot.error_bound;
      throw NumericalError(msg.str(), tot.value, tot.error_bound);
    }
    auto worst = std::max_element(
        segs.begin(), segs.end(),
        [](const Segment& x, const Segment& y) { return x.error < y.error; });
    Segment s = *worst;
    segs.erase(worst);
    double mid = 0.5 * (s.a + s.b);
    segs.push_back(gk15(f, s.a, mid));
    segs.push_back(gk15(f, mid, s.b));
    evals += 30;
  }
}

namespace {

GaussRule make_legendre(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

GaussRule make_hermite(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.x[1];
    } else {
      z = 2.0 * z - rule.x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-14) break;
    }
    rule.x[i] = z;
    rule.x[n - 1 - i] = -z;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / (pp * pp);
  }
  return rule;
}

std::mutex g_rule_mutex;
std::map<int, GaussRule> g_legendre;
std::map<int, GaussRule> g_hermite;

}  // namespace

const GaussRule& gauss_legendre(int n) {
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = g_legendre.find(n);
  if (it == g_legendre.end()) it = g_legendre.emplace(n, make_legendre(n)).first;
  return it->second;
}

const GaussRule& gauss_hermite(int n) {
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = g_hermite.find(n);
  if (it == g_hermite.end()) it = g_hermite.emplace(n, make_hermite(n)).first;
  return it->second;
}

namespace {

double hermite_2d_once(const std::function<double(double, double)>& g, double sigma,
                       int order) {
  const GaussRule& rule = gauss_hermite(order);
  double scale = sigma * std::sqrt(2.0);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    double xi = scale * rule.x[i];
    double row = 0.0;
    for (int j = 0; j < order; ++j) {
      row += rule.w[j] * g(xi, scale * rule.x[j]);
    }
    sum += rule.w[i] * row;
  }
  return 2.0 * sigma * sigma * sum;
}

}  // namespace

double integrate_gauss_weighted_2d(const std::function<double(double, double)>& g,
                                   double sigma, int order, double rel_tol,
                                   double abs_tol) {
  if (!(sigma > 0.0)) throw ConfigError("integrate_gauss_weighted_2d: sigma must be > 0");
  double coarse = hermite_2d_once(g, sigma, order);
  double fine = hermite_2d_once(g, sigma, 2 * order);
  double scale = std::max(std::abs(fine), 1e-300);
  double err = std::abs(fine - coarse);
  if (err > rel_tol * scale && err > abs_tol) {
    std::ostringstream msg;
    msg << "integrate_gauss_weighted_2d: no convergence between orders " << order
        << " and " << 2 * order << " (estimates " << coarse << ", " << fine << ")";
    throw NumericalError(msg.str(), fine, err);
  }
  return fine;
}

double find_root_bisection(const std::function<double(double)>& f, double lo,
                           double hi, double tol) {
  if (!(hi >= lo)) throw std::invalid_argument("find_root_bisection: bad bracket");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("find_root_bisection: no sign change on bracket");
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0 || std::abs(fm) <= tol || (hi - lo) <= tol * std::max(1.0, std::abs(mid)))
      return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace turbeam
