#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bosegas {

enum class PotentialKind { hard_core, soft_sphere, tabulated };

/// Nonnegative, spherically symmetric pair potential vanishing beyond R0.
///
/// Tabulated potentials interpolate linearly between samples, take the first
/// sample value below the first radius, and vanish beyond the last sample,
/// whose radius is R0.
struct RadialPotential {
  PotentialKind kind = PotentialKind::hard_core;
  double R0 = 1.0;
  double v0 = 0.0;
  std::vector<double> r;
  std::vector<double> v;
  int dimension = 3;

  static RadialPotential hard_core(double R0, int dimension = 3);
  static RadialPotential soft_sphere(double R0, double v0, int dimension = 3);
  static RadialPotential tabulated(std::vector<double> r, std::vector<double> v,
                                   int dimension = 3);

  /// Value at radius x; +inf inside a hard core.
  double operator()(double x) const;
  /// Value on (0, R0) extended continuously to R0 from the inside.
  double inner_value(double x) const;
  bool identically_zero() const;
  void validate() const;
};

struct GridSpec {
  std::size_t points = 4096;
  double extent_factor = 8.0;  ///< outer radius in units of R0, at least 4
};

/// Zero-energy solution. In 3D `u` is r*psi normalised so that u = r - a
/// beyond R0; in 2D `u` holds psi itself normalised so that psi = ln(r/a).
struct ScatteringSolution {
  std::vector<double> grid;
  std::vector<double> u;
  std::vector<double> du;
  double a = 0.0;
  double s = 0.0;  ///< kinetic fraction (3D, a > 0); 0 otherwise
  double mu = 1.0;
  int dimension = 3;
  double R0 = 0.0;
  std::size_t core_index = 0;  ///< grid index of R0
  double richardson_error = 0.0;
};

ScatteringSolution solve_zero_energy(const RadialPotential& v, double mu = 1.0,
                                     const GridSpec& grid = {});

/// |LHS - 8 pi mu a (1 - a/R)| / (8 pi mu a) for the 3D energy identity on
/// the ball of radius R.
double energy_identity_residual(const ScatteringSolution& sol, const RadialPotential& v,
                                double R);

/// The left side of the identity: integral over |x| <= R of
/// 2 mu |grad psi|^2 + v |psi|^2 with psi = u/r.
double energy_identity_lhs(const ScatteringSolution& sol, const RadialPotential& v, double R);

double s_parameter(const ScatteringSolution& sol);

/// 4 pi * integral_0^R [2 mu (u' - u/r)^2 + v u^2] dr for arbitrary radial
/// samples on the solution grid (u(0) = 0).
double radial_quadratic_form(const std::vector<double>& grid, const std::vector<double>& u,
                             const std::vector<double>& du, const RadialPotential& v,
                             double mu, double R);

/// v_lambda(r) = lambda^-2 v(r / lambda); scattering length scales by lambda.
RadialPotential dilate_potential(const RadialPotential& v, double lambda);

/// Rescales a unit-scattering-length potential to scattering length a_target.
RadialPotential scale_potential(const RadialPotential& v, double a_target, double mu = 1.0,
                                const GridSpec& grid = {}, double tol = 1e-6);

/// Two-column text file with `# dimension=` and `# R0=` header lines.
RadialPotential load_potential(const std::string& path);
void save_potential(const RadialPotential& v, const std::string& path);
void save_solution_csv(const ScatteringSolution& sol, const std::string& path);

}  // namespace bosegas
