#pragma once

#include <vector>

#include "bosegas/radial_functional.hpp"
#include "bosegas/scattering.hpp"

namespace bosegas {

enum class TrapKind { harmonic, power, box };

/// Radial trap: harmonic V = r^2, power V = r^s, or a hard-walled ball of
/// diameter `side` (V = 0 inside).
struct TrapPotential {
  TrapKind kind = TrapKind::harmonic;
  double s = 2.0;
  double side = 1.0;

  static TrapPotential harmonic();
  static TrapPotential power(double s);
  static TrapPotential box(double side);

  double operator()(double r) const;
  /// Homogeneity degree; infinite for the box.
  double degree() const;
  bool homogeneous() const { return kind != TrapKind::box; }
  void validate() const;
};

struct GPProblem {
  int dimension = 3;
  double N = 1.0;
  double coupling = 0.0;  ///< a in 3D, alpha in 2D
  double mu = 1.0;
  TrapPotential trap;
  std::size_t grid_points = 4000;  ///< minimum cell count; refined to resolve the healing length
  void validate() const;
};

struct DensityProfile {
  std::vector<double> r;
  std::vector<double> phi;
  std::vector<double> rho;
  double mass = 0;
};

struct EnergyReport {
  double E_total = 0;
  double kinetic = 0;
  double trap = 0;
  double interaction = 0;
  double mu_chem = 0;
  double residual_gp = 0;
  double int_rho2 = 0;  ///< integral of rho^2 = phi^4
};

struct GPResult {
  DensityProfile profile;
  EnergyReport report;
  std::vector<double> energy_history;
  int iterations = 0;
  RadialGrid grid;
};

/// Energy scale used to size the domain: the larger of the ideal-gas ground
/// energy and the Thomas-Fermi chemical potential. Depends on N and the
/// coupling only through their product.
double gp_energy_scale(const GPProblem& p);

RadialGrid gp_grid(const GPProblem& p);

GPResult gp_minimize(const GPProblem& p, const FlowOptions& opt = {});

/// Same as gp_minimize but starting from a caller-supplied profile on gp_grid(p).
GPResult gp_minimize_from(const GPProblem& p, std::vector<double> phi0,
                          const FlowOptions& opt = {});

struct Coupling2D {
  double alpha = 0;
  double rho_bar = 0;  ///< (1/N) int |phi_{N,1}|^4
};

Coupling2D coupling_2d(double N, double a, const TrapPotential& trap, double mu = 1.0,
                       std::size_t grid_points = 4000);

struct TFResult {
  DensityProfile profile;
  EnergyReport report;
  double mu_tf = 0;
};

/// rho = [m - V]_+ / (8 pi mu coupling) with m fixed by int rho = N.
TFResult tf_solve(int dimension, double N, double coupling, const TrapPotential& trap,
                  double mu = 1.0, std::size_t profile_points = 2001);

struct ComponentSplit {
  double kinetic = 0;      ///< mu int |grad phi|^2 + 4 pi mu a s int phi^4
  double trap = 0;         ///< int V phi^2
  double interaction = 0;  ///< (1 - s) 4 pi mu a int phi^4
  double s = 0;
  double sum = 0;
  double bookkeeping_residual = 0;  ///< |sum - E_total| / |E_total|
};

ComponentSplit energy_components(const GPProblem& p, const GPResult& gp,
                                 const ScatteringSolution& scattering);

struct LimitRow {
  double g = 0;
  double E_gp = 0;
  double E_tf = 0;
  double ratio = 0;
  double rescaled = 0;  ///< E_gp / g^{s/(s+d)}
};

std::vector<LimitRow> gp_tf_limit_scan(int dimension, const TrapPotential& trap,
                                       const std::vector<double>& g_list, double mu = 1.0);

}  // namespace bosegas
