#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bosegas {

struct BogolubovParams {
  double A = 0;
  double B_plus = 0;
  double B_minus = 0;
  void validate() const;
};

/// -(A + B) + sqrt((A + B)^2 - B^2) with B = B_plus + B_minus.
double bogolubov_bound(const BogolubovParams& p);

struct FoldyConstant {
  double I0 = 0;                  ///< (2/5) Gamma(3/4)/Gamma(5/4) (2/(mu pi))^{1/4}
  double x_integral_quadrature = 0;
  double x_integral_closed = 0;   ///< 2^{3/4} sqrt(pi) Gamma(3/4) / (5 Gamma(5/4))
};

/// Integrand 1 + x^4 - x^2 sqrt(2 + x^4), evaluated without cancellation.
double foldy_integrand(double x);

FoldyConstant foldy_constant(double mu);

struct FoldyLaw {
  double energy_per_particle = 0;  ///< -I0 rho^{1/4}
  double exponent = 0.25;
  std::string infinite_mass_note;
  std::optional<double> jellium;   ///< C_TF rho^{5/3} - C_D rho^{4/3}
};

FoldyLaw foldy_law(double rho, double mu, std::optional<double> C_TF = std::nullopt,
                   std::optional<double> C_D = std::nullopt);

struct LocalEnergy {
  double quadrature = 0;
  double closed_form = 0;  ///< -sqrt(2) pi^{-3/4} nu (nu / (mu ell^3))^{1/4} x_integral
};

/// -(1/2)(2 pi)^-3 int [P + Q - sqrt((P + Q)^2 - P^2)] d^3k with P = 4 pi nu / k^2
/// and Q = mu ell^3 k^2, by radial quadrature.
LocalEnergy local_energy_integral(double nu, double ell, double mu);

/// Radial integrand k^2 [P + Q - sqrt((P + Q)^2 - P^2)].
double local_energy_integrand(double k, double nu, double ell, double mu);

struct DysonSolution {
  std::vector<double> r;
  std::vector<double> Phi;
  double E_star = 0;
  double kinetic = 0;        ///< mu int |grad Phi|^2
  double potential = 0;      ///< I0 int Phi^{5/2}
  double virial_residual = 0;  ///< |2 kinetic - (3/4) potential| / potential
  double r_max = 0;
  double boundary_mass = 0;
  std::vector<double> energy_history;
  int iterations = 0;
};

/// Minimises mu int |grad Phi|^2 - I0 int Phi^{5/2} over radial Phi >= 0 with
/// int Phi^2 = 1. The domain grows until the mass in its outer tenth is
/// below 1e-12. Results are cached per (mu, points).
const DysonSolution& dyson_functional_minimize(double mu, std::size_t points = 2048);

struct TwoComponent {
  double energy = 0;      ///< N^{7/5} E_star
  double exponent = 1.4;
  double L = 0;           ///< N^{-1/5} length scale
  double ell_cor = 0;     ///< N^{-2/5}
};

TwoComponent two_component_energy(double N, double mu);

struct DysonHeuristic {
  double L = 0;
  double energy = 0;
};

/// Minimises N L^-2 - N (N / L^3)^{1/4} over L > 0.
DysonHeuristic dyson_heuristic(double N);

}  // namespace bosegas
