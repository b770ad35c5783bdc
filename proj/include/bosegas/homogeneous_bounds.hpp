#pragma once

#include <optional>
#include <vector>

#include "bosegas/scattering.hpp"

namespace bosegas {

struct GasState3D {
  double rho = 0;
  double a = 0;
  double mu = 1;
  double Y() const;  ///< 4 pi rho a^3 / 3
  void validate() const;
};

struct GasState2D {
  double rho = 0;
  double a = 0;
  double mu = 1;
  double logY() const;  ///< |ln(rho a^2)|
  void validate() const;
};

struct LengthScales {
  double a = 0;
  double mean_spacing = 0;
  double healing = 0;
  bool dilute = false;  ///< a < mean_spacing < healing
};

LengthScales length_scales(double rho, double a, int dimension);

/// Upper bound on the energy per particle. With `b` the finite-box formula at
/// density rho1 = rho is used (the finite-range variant needs b > R0); with no
/// `b` the thermodynamic form in Y is returned.
double upper_bound_3d(const GasState3D& s, std::optional<double> b = std::nullopt,
                      bool finite_range = false, double R0 = 0.0);

/// Upper bound divided by 4 pi mu rho a, thermodynamic form.
double upper_ratio_thermodynamic(double Y);

/// Classic Dyson ratio e/(4 pi mu rho a) >= 1/(10 sqrt 2).
double dyson_lower_constant();

struct LowerBound {
  double value = 0;  ///< clamped to be nonnegative
  double raw = 0;    ///< 4 pi mu rho a (1 - C Y^{1/17}) before clamping
  bool clamped = false;
};

LowerBound lower_bound_3d(const GasState3D& s, double C = 8.9);

double lhy_first_coefficient();   ///< 128 / (15 sqrt pi)
double lhy_second_coefficient();  ///< 8 (4 pi / 3 - sqrt 3)
double lhy_reference(const GasState3D& s);

/// Cell-method factor K(n, ell) with rho = n / ell^3 in the density factor.
/// Returns nullopt when the Temple denominator is not positive.
std::optional<double> K_factor(double n, double ell, double R, double R0, double eps, double a);

struct BoxBound {
  double value = 0;
  bool trivial = false;  ///< true when the trivial bound 0 was taken
  double K = 0;
};

/// (4 pi mu a / ell^3) n (n-1) K(n, ell), or 0 when K is unavailable or the
/// product is negative.
BoxBound finite_box_lower_bound(double n, double ell, double R, double R0, double eps,
                                const GasState3D& s);

struct BoxParameters {
  double eps = 0;
  double ell = 0;
  double R = 0;
};

/// eps = c_eps Y^{1/17}, a/ell = c_ell Y^{6/17}, (R^3 - R0^3)/ell^3 = c_R Y^{3/17}.
BoxParameters auto_box_parameters(const GasState3D& s, double R0, double c_eps = 1.0,
                                  double c_ell = 1.0, double c_R = 1.0);

/// 4 pi mu a rho (1 - 1/(rho ell^3)) K(4 rho ell^3, ell), clamped at 0.
BoxBound cell_method_lower_bound(const GasState3D& s, double R0, const BoxParameters& p);

struct Bounds2D {
  double upper = 0;        ///< 2 pi mu rho / (ln(b/a) - pi rho b^2)
  double lower = 0;        ///< leading term 4 pi mu rho / |ln(rho a^2)|
  double leading = 0;      ///< 4 pi mu rho / |ln(rho a^2)|
  double upper_error = 0;  ///< relative magnitude 1/ln(b/a), unit constant
  double lower_error = 0;  ///< relative magnitude |ln(rho a^2)|^{-1/5}, unit constant
  double b = 0;
};

Bounds2D bounds_2d(const GasState2D& s, std::optional<double> b = std::nullopt);

struct SoftPotential {
  double inner = 0;  ///< R0
  double outer = 0;  ///< R
  double value = 0;
  double a = 0;
  int dimension = 3;
  double normalization = 0;  ///< 3D: int U r^2 dr; 2D: int U ln(r/a) r dr
  double operator()(double r) const;
};

/// U_R: 3 (R^3 - R0^3)^{-1} on (R0, R) in 3D, 1/nu(R) in 2D.
SoftPotential soft_potential(double R, double R0, int dimension, double a = 0.0);

/// Normalised constant U on (r1, r2) with r1 >= R0.
SoftPotential annulus_potential(double r1, double r2, int dimension, double a = 0.0);

/// nu(R) = int_{R0}^R ln(r/a) r dr in closed form.
double nu_2d(double R, double R0, double a);

/// Samples of a radial function psi and its derivative along one ray.
struct RadialSamples {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> df;
};

/// LHS - RHS of the radial Dyson-lemma inequality on [0, R1]. In 3D the
/// right side is mu a int U psi^2 r^2 dr, in 2D mu int U psi^2 r dr.
double dyson_lemma_residual(const RadialSamples& psi, const RadialPotential& v,
                            const SoftPotential& U, double R1, double mu = 1.0);

/// <H> - (<H^2> - <H>^2) / (E1 - <H>).
double temple_bound(double h_mean, double h2_mean, double E1);

struct CellMin {
  double value = 0;
  double t = 0;
};

/// Minimum of t(t-1) + (k-t)(p-1)/2 over t in [1, k].
CellMin cell_distribution_min(double k, int p);

/// Exact minimum of sum_{n<p} c_n n(n-1) + 1/2 sum_{n>=p} c_n n (p-1) over
/// distributions on {0..n_max} with sum c_n = 1, sum n c_n = k.
double cell_distribution_brute(double k, int p, int n_max = 20);

/// x^2/|ln x| - 2 (b/|ln b|) x k + (b^2/|ln b|)(1 + 1/(2|ln b|)^2) k^2.
double lemma_xb_margin(double x, double b, double k);

}  // namespace bosegas
