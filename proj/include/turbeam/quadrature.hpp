#pragma once

#include <functional>
#include <vector>

namespace turbeam {

// Tolerances and node budgets shared by the quadrature-backed operations.
struct QuadratureSettings {
  double rel_tol_1d = 1e-8;
  double rel_tol_4d = 1e-5;
  int max_nodes_1d = 2048;     // evaluation budget for adaptive 1D integrals
  int hermite_order = 64;
  double k_cutoff_factor = 12.0;
  bool check_convergence = true;  // Richardson-style node bump on 4D integrals

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f on [a, b].
// Subdivides the worst segment until error_bound <= rel_tol * |value|
// (with an absolute floor for integrals that are genuinely zero).
// Throws NumericalError carrying the best estimate if the node budget runs
// out first.
IntegralResult integrate_radial(const std::function<double(double)>& f, double a,
                                double b, double rel_tol = 1e-8,
                                int max_nodes = 2048);

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Cached Gauss-Legendre rule on [-1, 1].
const GaussRule& gauss_legendre(int n);

// Cached Gauss-Hermite rule (physicists' weight exp(-x^2)).
const GaussRule& gauss_hermite(int n);

// Int d^2x g(x) exp(-|x|^2 / (2 sigma^2)) by tensor Gauss-Hermite, with an
// order-doubling convergence check. Throws NumericalError on non-convergence.
// abs_tol is the caller's "immaterial" absolute scale; integrals that cancel
// or underflow below it count as converged.
double integrate_gauss_weighted_2d(const std::function<double(double, double)>& g,
                                   double sigma, int order = 64,
                                   double rel_tol = 1e-8, double abs_tol = 0.0);

// Bisection root finder; requires a sign change on [lo, hi] (a root exactly
// at a bracket edge is returned as-is).
double find_root_bisection(const std::function<double(double)>& f, double lo,
                           double hi, double tol);

}  // namespace turbeam
