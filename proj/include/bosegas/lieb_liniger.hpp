#pragma once

#include <memory>
#include <string>
#include <vector>

namespace bosegas {

/// One solution of the Lieb-Liniger integral equation at coupling lambda:
/// g(x) = 1/(2 pi) + (1/2 pi) int_{-1}^{1} 2 lambda / (lambda^2 + (x-y)^2) g(y) dy.
struct LLPoint {
  double lambda = 0;
  double gamma = 0;     ///< lambda / int g
  double e_gamma = 0;   ///< energy density per rho^3 at gamma
  double de_dgamma = 0;
  double dgamma_dlambda = 0;
  int cells = 0;        ///< Nystrom panels on [0, 1]
};

/// Solves at fixed lambda by product-integration Nystrom with piecewise
/// linear g and one Richardson step (panels and half the panels).
LLPoint ll_solve_lambda(double lambda, int cells = 0);

/// Solves for the lambda that produces the requested gamma.
LLPoint ll_solve_gamma(double gamma, double lambda_guess = 0.0);

/// e(t) for the Hamiltonian -sum d^2 + g sum delta at t = g / rho, by a direct
/// solve of the integral equation (t = 2 gamma).
double ll_energy_density(double t);

/// Tabulated e(t) on log-spaced nodes with exact slopes, interpolated by a
/// monotone cubic Hermite spline in (ln t, ln e). Immutable after build.
class LLCurve {
 public:
  static constexpr double default_t_min = 1e-4;
  static constexpr double default_t_max = 1e6;
  static constexpr int default_nodes = 200;

  static LLCurve build(int nodes = default_nodes, double t_min = default_t_min,
                       double t_max = default_t_max);
  static LLCurve from_nodes(std::vector<double> t, std::vector<double> e, std::vector<double> de);

  /// Process-wide curve with default nodes, cached on disk when the
  /// BOSEG_CACHE_DIR environment variable names a directory.
  static const LLCurve& standard();

  double e(double t) const;
  double de(double t) const;
  double d2e(double t) const;

  const std::vector<double>& t_nodes() const { return t_; }
  const std::vector<double>& e_nodes() const { return e_; }
  const std::vector<double>& slope_nodes() const { return de_; }

  void write_csv(const std::string& path) const;
  static LLCurve read_csv(const std::string& path);

 private:
  std::vector<double> t_, e_, de_;
  std::vector<double> x_, y_, m_;  // ln t, ln e, limited d ln e / d ln t
  void prepare();
  // Value and the first two derivatives of ln e with respect to ln t.
  void eval_log(double x, double& y, double& dy, double& d2y) const;
};

}  // namespace bosegas
