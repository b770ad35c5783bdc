#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bosegas {

/// Cell-centred radial finite-volume grid on [0, r_max] for radially
/// symmetric functions in d = 1 (even functions, z >= 0), 2 or 3 dimensions.
/// The outer face carries a Dirichlet condition.
struct RadialGrid {
  int dimension = 3;
  double h = 0;
  double r_max = 0;
  std::vector<double> r;     ///< cell centres
  std::vector<double> w;     ///< exact cell measures S_d int r^{d-1} dr
  std::vector<double> face;  ///< face[i]: coupling between cells i and i+1; last entry is the wall

  std::size_t size() const { return r.size(); }
};

RadialGrid make_radial_grid(int dimension, std::size_t cells, double r_max);

/// Surface measure S_d: 2, 2 pi, 4 pi.
double sphere_measure(int dimension);

/// Local density term F(rho) with its first two derivatives.
struct LocalTerm {
  std::function<double(double)> F;
  std::function<double(double)> dF;
  std::function<double(double)> d2F;
};

LocalTerm quadratic_term(double c);  ///< F = c rho^2
LocalTerm zero_term();

/// E[phi] = kin * sum face (dphi)^2 + sum w (V phi^2 + F(phi^2)).
struct RadialFunctional {
  const RadialGrid* grid = nullptr;
  double kinetic = 1.0;
  std::vector<double> V;
  LocalTerm term;

  double kinetic_energy(const std::vector<double>& phi) const;
  double potential_energy(const std::vector<double>& phi) const;
  double interaction_energy(const std::vector<double>& phi) const;
  double energy(const std::vector<double>& phi) const;
  double mass(const std::vector<double>& phi) const;
  /// (H phi)_i = kin (K phi)_i / w_i + (V_i + F'(phi_i^2)) phi_i.
  std::vector<double> apply_H(const std::vector<double>& phi) const;
  /// Lagrange multiplier <phi, H phi>_w / <phi, phi>_w.
  double multiplier(const std::vector<double>& phi) const;
  /// sup |H phi - lambda phi| / (|lambda| sup |phi|).
  double residual(const std::vector<double>& phi, double lambda) const;
};

struct FlowOptions {
  int max_iterations = 20000;
  double residual_tol = 1e-8;
  double energy_tol = 1e-12;
  double tau0 = 0.0;  ///< initial step; 0 selects 0.1 / (energy scale)
  bool newton_polish = true;
  bool record_history = true;
};

struct FlowResult {
  std::vector<double> phi;
  double energy = 0;
  double lambda = 0;
  double residual = 0;
  std::vector<double> history;  ///< accepted energies, nonincreasing
  int iterations = 0;
  bool converged = false;
};

/// Minimises the functional under sum w phi^2 = N by a normalised
/// semi-implicit gradient flow with backtracking, followed by Newton steps on
/// the Euler-Lagrange system. Throws NumericError when not converged.
FlowResult minimize_normalized(const RadialFunctional& f, double N, std::vector<double> phi0,
                               const FlowOptions& opt = {});

}  // namespace bosegas
