#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bosegas/charged.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/oracles.hpp"

using namespace bosegas;
using num::pi;

TEST_CASE("twisted Laplacian: closed form and plane waves") {
  CHECK(twisted_ground_exact(2.0, 1.0) == doctest::Approx(0.25));
  // phi and phi + 2 pi are the same twist
  CHECK(twisted_ground_exact(1.0, 3.0 + 2 * pi) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(twisted_ground_exact(1.0, 4.0) == doctest::Approx(std::pow(2 * pi - 4.0, 2)).epsilon(1e-12));
  const double L = 1.3, phi = 0.9;
  const auto pw = twisted_spectrum(L, phi, 32, 5, SpectrumMethod::plane_wave);
  std::vector<double> exact;
  for (int m = -5; m <= 5; ++m) exact.push_back(std::pow((2 * pi * m + phi) / L, 2));
  std::sort(exact.begin(), exact.end());
  REQUIRE(pw.eigenvalues.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(pw.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(1e-12));
}

TEST_CASE("finite-difference twisted spectrum is second order") {
  const double L = 1, phi = 1.2, e = twisted_ground_exact(L, phi);
  const double e64 = std::abs(twisted_spectrum(L, phi, 64, 1).eigenvalues[0] - e);
  const double e128 = std::abs(twisted_spectrum(L, phi, 128, 1).eigenvalues[0] - e);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.02));
  const auto sp = twisted_spectrum(L, phi, 64, 3);
  CHECK(sp.ground.size() == 64);
  // the ground vector is a single plane wave: constant modulus
  double lo = INFINITY, hi = 0;
  for (auto z : sp.ground) {
    lo = std::min(lo, std::abs(z));
    hi = std::max(hi, std::abs(z));
  }
  CHECK(hi - lo < 1e-8 * hi);
  // phi = pi: two degenerate lowest states
  const auto deg = twisted_spectrum(L, pi, 128, 2);
  CHECK(deg.eigenvalues[1] - deg.eigenvalues[0] < 1e-9);
}

TEST_CASE("homogeneous Poincare ratio without holes is bounded by 1/pi^2") {
  std::mt19937_64 rng(17);
  const std::vector<bool> none(16 * 16 * 16, false);
  double worst = 0;
  for (int c = 0; c < 20; ++c) {
    const auto f = random_field(Boundary::neumann, 16, 1.0, 3, rng);
    worst = std::max(worst, poincare_check(PoincareVariant::homogeneous, f, none).ratio);
  }
  CHECK(worst <= 1 / (pi * pi) * (1 + 1e-10));
  CHECK(worst > 0.5 / (pi * pi));
}

TEST_CASE("Poincare ratios are invariant under dilation of the cube") {
  for (auto v : {PoincareVariant::homogeneous, PoincareVariant::vector_potential}) {
    const auto bnd = v == PoincareVariant::vector_potential ? Boundary::periodic : Boundary::neumann;
    std::mt19937_64 r1(5), r2(5), ro(6);
    const auto hole = random_omega_complement(16, 4, 0.25, ro);
    const auto f1 = random_field(bnd, 16, 1.0, 2, r1);
    const auto f3 = random_field(bnd, 16, 3.0, 2, r2);
    PoincareParams p;
    p.phi = 1.0;
    const auto a = poincare_check(v, f1, hole, p), b = poincare_check(v, f3, hole, p);
    CHECK(a.finite);
    CHECK(a.omega_c_fraction == doctest::Approx(b.omega_c_fraction));
    CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-10));
  }
  // the inhomogeneous form is stated on the unit cube: its ratio carries L^2
  std::mt19937_64 r1(5), r2(5), ro(6);
  const auto hole = random_omega_complement(16, 4, 0.25, ro);
  auto f1 = random_field(Boundary::neumann, 16, 1.0, 2, r1);
  auto f3 = random_field(Boundary::neumann, 16, 3.0, 2, r2);
  PoincareParams p1, p3;
  p1.h = default_weight(f1);
  p3.h = default_weight(f3);
  project_weighted_mean(f1, p1.h);
  project_weighted_mean(f3, p3.h);
  CHECK(poincare_check(PoincareVariant::inhomogeneous, f3, hole, p3).ratio ==
        doctest::Approx(9 * poincare_check(PoincareVariant::inhomogeneous, f1, hole, p1).ratio).epsilon(1e-9));
}

TEST_CASE("vector potential variant without holes") {
  std::mt19937_64 rng(23);
  const std::vector<bool> none(12 * 12 * 12, false);
  PoincareParams p;
  p.phi = 1.0;
  for (int c = 0; c < 10; ++c) {
    const auto f = random_field(Boundary::periodic, 12, 1.0, 2, rng);
    CHECK(poincare_check(PoincareVariant::vector_potential, f, none, p).ratio == 0.0);
  }
  std::mt19937_64 r(1);
  CHECK(random_omega_complement(8, 4, 0.0, r) == std::vector<bool>(512, false));
}

TEST_CASE("band localisation: trivial and tridiagonal cases") {
  BandMatrixCase c;
  c.A = 2.5 * Eigen::MatrixXcd::Identity(6, 6);
  c.psi = Eigen::VectorXcd::Constant(6, 1 / std::sqrt(6.0));
  c.M = 2;
  const auto l = localize_band_matrix(c);
  CHECK(l.lambda == doctest::Approx(2.5));
  CHECK(l.lhs == doctest::Approx(2.5));
  CHECK(l.C_required == 0.0);
  CHECK(l.phi.norm() == doctest::Approx(1.0));
  // 1D Laplacian with its ground vector: lambda is the lowest eigenvalue
  const int n = 20;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 2;
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -1;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  c.A = A;
  c.psi = es.eigenvectors().col(0);
  c.M = 5;
  const auto t = localize_band_matrix(c);
  CHECK(t.lambda == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
  CHECK(t.lhs >= t.lambda);
  CHECK(t.holds(10.0));
  CHECK(t.far_sum == 0.0);  // tridiagonal: d_k vanishes for k >= 2
  const auto cal = localize_calibrate(50, 12, 4, 99);
  CHECK(cal.failures == 0);
  CHECK(cal.worst_C < 10);
}

TEST_CASE("delta gas exact diagonalisation limits") {
  CHECK(std::abs(exact_diag_delta_gas_1d(2, 1.0, 0.0, Boundary::periodic).E0) < 1e-10);
  CHECK(std::abs(exact_diag_delta_gas_1d(3, 1.0, 0.0, Boundary::neumann).E0) < 1e-10);
  CHECK(exact_diag_delta_gas_1d(2, 1.0, 0.0, Boundary::dirichlet).E0 == doctest::Approx(2 * pi * pi).epsilon(1e-4));
  CHECK(free_fermion_ring_energy(2, 1.0) == doctest::Approx(2 * pi * pi));
  CHECK(free_fermion_ring_energy(3, 2.0) == doctest::Approx(2 * pi * pi));
  // hard-core limit: the Bose gas on a ring maps to free fermions
  const double ff = free_fermion_ring_energy(2, 2.0);
  const double E = exact_diag_delta_gas_1d(2, 2.0, 1e3, Boundary::periodic).E0;
  CHECK(E < ff);
  CHECK(E == doctest::Approx(ff).epsilon(0.01));
  CHECK_THROWS_AS(exact_diag_delta_gas_1d(4, 1.0, 1.0, Boundary::periodic), PreconditionError);
}

TEST_CASE("Neumann lattice energies are superadditive") {
  const int s = 24;
  for (double g : {1.0, 10.0}) {
    std::vector<double> half{0.0};
    for (int k = 1; k <= 3; ++k) half.push_back(delta_gas_lattice_energy(k, 1.0, g, Boundary::neumann, s));
    for (int n = 2; n <= 3; ++n) {
      double best = INFINITY;
      for (int k = 0; k <= n; ++k) best = std::min(best, half[k] + half[n - k]);
      CHECK(delta_gas_lattice_energy(n, 2.0, g, Boundary::neumann, 2 * s) >= best - 1e-10);
    }
    // Neumann below Dirichlet
    CHECK(delta_gas_lattice_energy(3, 1.0, g, Boundary::neumann, s) <= delta_gas_lattice_energy(3, 1.0, g, Boundary::dirichlet, s));
  }
}

TEST_CASE("truncated Fock ground energies") {
  CHECK(fock_quadratic_ground(1, 0, 0, 10).E0 == doctest::Approx(0.0));
  double prev = INFINITY;
  const double bog = bogolubov_bound({1, 0.5, 0});
  for (int cut : {2, 4, 8, 16, 32}) {
    const auto f = fock_quadratic_ground(1, 0.5, 0, cut);
    CHECK(f.E0 <= prev + 1e-14);
    CHECK(f.E0 >= bog - 1e-12);
    CHECK(f.modes == 2);
    prev = f.E0;
  }
  const auto four = fock_quadratic_ground(1, 0.5, 0.3, 4);
  CHECK(four.modes == 4);
  CHECK(four.E0 >= bogolubov_bound({1, 0.5, 0.3}) - 1e-12);
  CHECK(fock_quadratic_ground(1, 0.5, 0.3, 6).E0 <= four.E0 + 1e-12);
  CHECK_THROWS_AS(fock_quadratic_ground(1, 0.5, 0, 1), PreconditionError);
}

TEST_CASE("finite-difference gradients") {
  const int n = 64;
  std::vector<double> p(n), d(n);
  for (int i = 0; i < n; ++i) {
    const double x = 6.0 * (i + 0.5) / n;
    p[i] = std::exp(-x * x / 2);
    d[i] = x * std::exp(-x);
  }
  const std::vector<double> hs{1e-2, 5e-3, 2.5e-3};
  const auto q = fd_gradient_check(FDFunctional::quadratic, p, d, hs);
  CHECK(q.max_deviation < 1e-9);  // central differences are exact on quadratics
  for (auto id : {FDFunctional::gp, FDFunctional::tf}) {
    const auto c = fd_gradient_check(id, p, d, hs);
    CHECK(c.max_deviation < 1e-4);
  }
  const auto gp = fd_gradient_check(FDFunctional::gp, p, d, {1e-1, 5e-2, 2.5e-2});
  CHECK(gp.slope == doctest::Approx(2.0).epsilon(0.05));
}
