#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bosegas::num {

inline constexpr double pi = 3.14159265358979323846264338327950288;

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Composite Simpson rule on nodes x[i0..i1] (nonuniform spacing allowed).
// An odd trailing interval is closed with the quadratic through its last
// three nodes.
double simpson(const std::vector<double>& x, const std::vector<double>& f,
               std::size_t i0, std::size_t i1);

double trapezoid(const std::vector<double>& x, const std::vector<double>& f);

// Thomas algorithm for a tridiagonal system; sub[0] and sup[n-1] unused.
std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& sup,
                                      const std::vector<double>& rhs);

// Root of f on [lo, hi]; f(lo) and f(hi) must bracket a sign change.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-15, int max_iter = 200);

// Expands [lo, hi] geometrically (lo>0) until f changes sign, then solves.
double find_root_expanding(const std::function<double(double)>& f, double lo,
                           double hi, double rel_tol = 1e-15);

// Integral on [a,b] by tanh-sinh quadrature (tolerates endpoint singularities).
double integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-13);

// Integral on [a, inf) by exp-sinh quadrature.
double integrate_exp_sinh(const std::function<double(double)>& f, double a,
                          double tol = 1e-13);

// Adaptive Gauss-Kronrod (61 point) on a finite interval.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-13);

using MatVec = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct LanczosResult {
  double eigenvalue = 0;
  std::vector<double> vector;
  int iterations = 0;
  bool converged = false;
};

// Lowest eigenpair of a real symmetric operator by Lanczos with full
// reorthogonalization and restarts from the current Ritz vector.
LanczosResult lanczos_lowest(const MatVec& apply, const std::vector<double>& start,
                             double tol = 1e-11, int krylov = 80, int restarts = 60);

}  // namespace bosegas::num
