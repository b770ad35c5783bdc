#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace bosegas {

// ---------------------------------------------------------------- twisted Laplacian

enum class SpectrumMethod { finite_difference, plane_wave };

struct TwistedSpectrum {
  std::vector<double> eigenvalues;  ///< ascending
  std::vector<std::complex<double>> ground;  ///< finite-difference ground vector (empty for plane waves)
};

/// Spectrum of -(d/dz + i phi / L)^2 on a periodic interval of length L.
TwistedSpectrum twisted_spectrum(double L, double phi, int n_grid, int n_eigs,
                                 SpectrumMethod method = SpectrumMethod::finite_difference);

/// min over integers m of ((2 pi m + phi) / L)^2.
double twisted_ground_exact(double L, double phi);

// ---------------------------------------------------------------- Poincare checks

enum class Boundary { periodic, neumann, dirichlet };

/// Values and gradients at the n^3 cell midpoints of the cube [0, L]^3.
struct DiscreteField {
  int n = 0;
  double L = 1;
  Boundary boundary = Boundary::neumann;
  std::vector<std::complex<double>> f;
  std::array<std::vector<std::complex<double>>, 3> grad;

  std::size_t size() const { return f.size(); }
  std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * n + j) * n + k; }
  double cell_volume() const { return std::pow(L / n, 3); }
  void validate() const;
};

/// Random trigonometric polynomial with modes up to `max_mode` per axis and
/// analytic gradient: a cosine series for Neumann, complex exponentials for
/// periodic boundaries.
DiscreteField random_field(Boundary boundary, int n, double L, int max_mode, std::mt19937_64& rng);

/// Omega^c as a union of cells from a blocks^3 lattice; true marks Omega^c.
std::vector<bool> random_omega_complement(int n, int blocks, double fraction, std::mt19937_64& rng);

enum class PoincareVariant { homogeneous, vector_potential, inhomogeneous };

struct PoincareParams {
  double phi = 0;  ///< vector-potential variant, |phi| < pi
  double c = -1;   ///< vector-potential c; negative selects 2 pi (pi - |phi|)
  /// Inhomogeneous weight h on midpoints; empty selects (1 + cos(pi x / L) / 2) / L^3.
  std::vector<double> h;
};

struct PoincareResult {
  double ratio = 0;
  double lhs = 0;
  double rhs = 0;              ///< structural right side without the constant
  double omega_c_fraction = 0;  ///< |Omega^c| / |K|
  bool finite = true;
};

/// Default inhomogeneous weight on the midpoint grid of `f`.
std::vector<double> default_weight(const DiscreteField& f);

/// Projects f onto {int f h = 0}; gradients are unchanged.
void project_weighted_mean(DiscreteField& f, const std::vector<double>& h);

/// Ratio of the left side to the structural right side.
///  homogeneous:  int |f - <f>|^2 / (L^2 int_Omega |grad f|^2 + |Omega^c|^{2/3} int |grad f|^2)
///  inhomogeneous: int |f|^2 / (int_Omega |grad f|^2 + (|Omega^c|/|K|)^{2/3} int |grad f|^2)
///  vector_potential: [phi^2/L^2 |f|^2 + c/L^2 |f - <f>|^2 - |grad_phi f|^2_Omega]
///                    / [(|grad_phi f|^2_K + |f|^2/L^2)(|Omega^c|/L^3)^{1/2}]
/// For Omega = K in the vector variant the ratio is 0 when the numerator is
/// nonpositive and infinite otherwise.
PoincareResult poincare_check(PoincareVariant variant, const DiscreteField& f,
                              const std::vector<bool>& omega_complement, const PoincareParams& params = {});

struct PoincareCalibration {
  double max_ratio = 0;  ///< maximal finite ratio over the corpus (may be negative)
  double C_hat = 0;      ///< max(max_ratio, 0)
  double max_ratio_nonempty = 0;  ///< maximum over cases with nonempty Omega^c
  int cases = 0;
  int counterexamples = 0;
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<double> ratios;
};

/// Seeded corpus of random fields and random Omega^c (fraction uniform in [0, 1/2]).
/// A counterexample is a non-finite ratio or, for Omega = K, a violation of
/// the classical bound (1/pi^2 homogeneous, nonpositive numerator vector).
PoincareCalibration poincare_calibrate(PoincareVariant variant, int cases, int n, std::uint64_t seed,
                                       double L = 1.0, double phi = 1.0);

// ---------------------------------------------------------------- band matrix localisation

struct BandMatrixCase {
  Eigen::MatrixXcd A;
  Eigen::VectorXcd psi;
  int M = 1;
  void validate() const;
};

struct Localization {
  int n = 0;  ///< window start (0-based); phi is supported on [n, n + M)
  Eigen::VectorXcd phi;
  double lhs = 0;     ///< (phi, A phi)
  double lambda = 0;  ///< (psi, A psi)
  std::vector<double> d;  ///< d_k = (psi, A^k psi)
  double near_sum = 0;    ///< M^-2 sum_{k=1}^{M-1} k^2 |d_k|
  double far_sum = 0;     ///< sum_{k>=M} |d_k|
  double C_required = 0;  ///< smallest C making the inequality hold (0 if lhs <= lambda)
  bool holds(double C, double tol = 1e-10) const;
};

Localization localize_band_matrix(const BandMatrixCase& c);

struct BandCalibration {
  int cases = 0;
  int failures = 0;         ///< cases where the inequality fails with the given C
  double worst_C = 0;       ///< largest C_required over the corpus
  std::uint64_t seed = 0;
};

/// Random real symmetric tridiagonal matrices of size N + 1 (standard normal
/// entries) with psi their ground vector.
BandCalibration localize_calibrate(int cases, int N, int M, std::uint64_t seed, double C = 10.0);

// ---------------------------------------------------------------- small exact diagonalisation

struct ExactDiag1D {
  double E0 = 0;        ///< Richardson extrapolation of the two grids
  double E_coarse = 0;
  double E_fine = 0;
  int sites = 0;        ///< coarse grid sites
  double extrapolation_gap = 0;  ///< |E_fine - E0| / max(|E0|, 1)
};

/// Ground energy of -sum d^2 + g sum_{i<j} delta(z_i - z_j) for n <= 3 bosons
/// on [0, ell] with the given boundary, on a lattice with on-site contact
/// g / dz, extrapolated from `sites` and 2 `sites` (0 selects a size that
/// resolves 1 / g).
ExactDiag1D exact_diag_delta_gas_1d(int n, double ell, double g, Boundary boundary, int sites = 0);

/// Lattice ground energy at a fixed number of sites.
double delta_gas_lattice_energy(int n, double ell, double g, Boundary boundary, int sites);

/// Free-fermion ground energy of n particles on a ring of length ell
/// (periodic momenta for odd n, antiperiodic for even n).
double free_fermion_ring_energy(int n, double ell);

// ---------------------------------------------------------------- truncated Fock check

struct FockGround {
  double E0 = 0;
  int modes = 0;
  int cutoff = 0;
  std::size_t dimension = 0;
};

/// Ground energy of the quadratic Bogolubov form with true annihilation
/// operators on a Fock space truncated at `cutoff` quanta per mode (two modes
/// when B_minus = 0, four otherwise), restricted to the sector that contains
/// the vacuum.
FockGround fock_quadratic_ground(double A, double B_plus, double B_minus, int cutoff);

// ---------------------------------------------------------------- finite-difference gradients

enum class FDFunctional { quadratic, gp, tf };

struct FDCheck {
  std::vector<double> h;
  std::vector<double> deviation;  ///< |FD - analytic| / |analytic| per h
  double max_deviation = 0;
  double slope = 0;  ///< log-log slope of deviation against h
  double analytic = 0;
};

/// Central differences of a functional on a 3D radial grid with
/// point.size() cells against the analytic first variation along `direction`.
/// gp and quadratic act on phi; tf acts on rho.
FDCheck fd_gradient_check(FDFunctional id, const std::vector<double>& point, const std::vector<double>& direction,
                          const std::vector<double>& h_list);

}  // namespace bosegas
