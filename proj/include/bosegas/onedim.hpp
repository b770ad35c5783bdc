#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bosegas/lieb_liniger.hpp"
#include "bosegas/meanfield.hpp"

namespace bosegas {

enum class TransverseKind { harmonic, hard_wall };

/// Elongated trap in units hbar = 2m = 1: longitudinal V_L(z) = L^-2 |z/L|^s
/// (s = infinity: hard walls at |z| = L/2) and transverse V_r = r^-2 V(x/r).
struct ElongatedTrap {
  double N = 1;
  double L = 1;
  double r = 0.01;
  double a = 1e-4;
  double s = 2;
  TransverseKind transverse = TransverseKind::harmonic;
  void validate() const;
  /// Non-fatal diagnostics: r < L and a < r are expected.
  std::vector<std::string> warnings() const;
};

struct TransverseMode {
  double e_perp_unit = 0;  ///< ground energy of -Delta + V at r = 1
  double e_perp = 0;       ///< e_perp_unit / r^2
  double int_b4_unit = 0;  ///< int |b|^4 at r = 1
  double g = 0;            ///< 8 pi a / r^2 int |b|^4
  std::function<double(double)> b;  ///< normalised profile at r = 1, radial argument
};

TransverseMode transverse_mode(TransverseKind kind, double r, double a);
TransverseMode transverse_mode(const ElongatedTrap& trap);

enum class Functional1D { full, gp1d, tf1d, ll_no_grad, gt };

const char* functional_name(Functional1D k);

struct Result1D {
  DensityProfile profile;  ///< even profile sampled on z >= 0
  double E = 0;
  double rho_bar = 0;      ///< (1/N) int rho^2
  double mu = 0;           ///< chemical potential (Lagrange multiplier)
  double residual = 0;     ///< gradient-flow residual; 0 for closed forms
  std::vector<double> energy_history;
};

/// Longitudinal trap value V_L(z).
double longitudinal_potential(double z, double L, double s);

/// Minimises the chosen 1D functional at fixed N. Closed forms are used for
/// tf1d, ll_no_grad and gt; full and gp1d use the normalised gradient flow in
/// the sqrt(rho) variable. `curve` is required for full and ll_no_grad.
Result1D minimize_1d(Functional1D kind, double N, double L, double g, double s,
                     const LLCurve* curve = nullptr, std::size_t grid_points = 4000);

/// Local density term: 0.5 g rho^2 (gp1d, tf1d), rho^3 e(g / rho) (full,
/// ll_no_grad) or (pi^2 / 3) rho^3 (gt).
LocalTerm local_term_1d(Functional1D kind, double g, const LLCurve* curve = nullptr);

struct RegimeThresholds {
  double much_less = 1e-2;  ///< "<<" means ratio below this
  double much_more = 1e2;   ///< ">>" means ratio above this
};

struct RegimeReport {
  int region = 0;
  bool ambiguous = false;
  int alternative = 0;  ///< second candidate when ambiguous
  double g = 0;
  double rho_bar = 0;
  double ratio = 0;         ///< g / rho_bar
  double ratio_scaled = 0;  ///< (g / rho_bar) N^2
  double validity = 0;      ///< r^2 rho_bar min(rho_bar, g)
  bool valid = false;
  int passes = 0;
  std::string functional;
  std::string scaling;
  std::vector<std::string> warnings;
};

/// Region from the ratio g / rho_bar alone.
RegimeReport classify_ratio(double ratio, double N, const RegimeThresholds& th = {});

/// Computes g and rho_bar (rho_bar from ll_no_grad, then from the functional
/// of the region found, classified once more) and reports the region.
RegimeReport regime_classify(const ElongatedTrap& trap, const RegimeThresholds& th = {},
                             const LLCurve* curve = nullptr, double validity_threshold = 1e-2);

struct BoxBounds1D {
  double lower = 0;
  double upper = 0;
  double lower_factor = 0;  ///< 1 - C n (a/r)^{1/8} [1 + (n r / ell)(a/r)^{1/8}]
  double upper_factor = 0;  ///< 1 + C [(n a / r)^2 (1 + a ell / r^2)]^{1/3}
  double bracket = 0;       ///< (n a / r)^2 (1 + a ell / r^2), must be < 1
};

BoxBounds1D box_bounds_1d(double n, double ell, double r, double a, double E1D_N, double E1D_D,
                          double C = 1.0);

}  // namespace bosegas
