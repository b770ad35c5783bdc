#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "bosegas/errors.hpp"
#include "bosegas/scattering.hpp"

using namespace bosegas;

namespace {

// Piecewise solution of -2 mu u'' + v0 u = 0 inside, u = r - a outside.
double soft_sphere_a_3d(double R0, double v0, double mu) {
  const double k = std::sqrt(v0 / (2 * mu));
  return R0 * (1 - std::tanh(k * R0) / (k * R0));
}

// Inside psi = I0(k r); outside psi = ln(r / a); log-derivatives matched at R0.
double soft_disc_a_2d(double R0, double v0, double mu) {
  const double k = std::sqrt(v0 / (2 * mu));
  const double ratio = std::cyl_bessel_i(1, k * R0) / std::cyl_bessel_i(0, k * R0);
  return R0 * std::exp(-1.0 / (k * R0 * ratio));
}

}  // namespace

TEST_CASE("hard core has a = R0 in both dimensions") {
  for (double R0 : {0.5, 1.0, 3.0}) {
    CHECK(solve_zero_energy(RadialPotential::hard_core(R0)).a == doctest::Approx(R0).epsilon(1e-10));
    CHECK(solve_zero_energy(RadialPotential::hard_core(R0, 2)).a == doctest::Approx(R0).epsilon(1e-6));
  }
}

TEST_CASE("soft sphere against the piecewise closed form") {
  for (double v0 : {0.1, 1.0, 10.0, 200.0})
    for (double mu : {0.5, 1.0}) {
      const auto sol = solve_zero_energy(RadialPotential::soft_sphere(1.0, v0), mu);
      CHECK(sol.a == doctest::Approx(soft_sphere_a_3d(1.0, v0, mu)).epsilon(1e-8));
      CHECK(sol.s > 0);
      CHECK(sol.s <= 1.0 + 1e-12);
    }
}

TEST_CASE("2D soft disc against the Bessel closed form") {
  for (double v0 : {1.0, 20.0}) {
    const auto sol = solve_zero_energy(RadialPotential::soft_sphere(1.0, v0, 2));
    CHECK(sol.a == doctest::Approx(soft_disc_a_2d(1.0, v0, 1.0)).epsilon(1e-5));
  }
}

TEST_CASE("vanishing potential") {
  const auto zero = RadialPotential::soft_sphere(1.0, 0.0);
  CHECK(std::abs(solve_zero_energy(zero).a) < 1e-12);
  CHECK_THROWS_WITH_AS(solve_zero_energy(RadialPotential::soft_sphere(1.0, 0.0, 2)),
                       doctest::Contains("no logarithmic asymptote"), Error);
}

TEST_CASE("invalid potentials are rejected") {
  CHECK_THROWS_AS(RadialPotential::tabulated({0.1, 0.5, 1.0}, {1.0, -0.2, 0.0}).validate(), PreconditionError);
  GridSpec g;
  g.extent_factor = 2.0;
  CHECK_THROWS_AS(solve_zero_energy(RadialPotential::hard_core(1.0), 1.0, g), PreconditionError);
  g = {};
  g.points = 0;
  CHECK_THROWS_AS(solve_zero_energy(RadialPotential::hard_core(1.0), 1.0, g), PreconditionError);
}

TEST_CASE("energy identity holds for hard and soft cores") {
  const auto hc = RadialPotential::hard_core(1.0);
  const auto s = solve_zero_energy(hc);
  // 8 pi a (1 - a/R) = 4 pi at a = 1, R = 2
  CHECK(energy_identity_lhs(s, hc, 2.0) == doctest::Approx(4 * M_PI).epsilon(1e-8));
  const auto ss = RadialPotential::soft_sphere(1.0, 10.0);
  const auto t = solve_zero_energy(ss);
  for (double R : {1.0, 2.0, 4.0, 8.0}) CHECK(energy_identity_residual(t, ss, R) < 1e-5);
  CHECK_THROWS_AS(energy_identity_residual(t, ss, 0.5), PreconditionError);
}

TEST_CASE("hard core s parameter is one") {
  CHECK(s_parameter(solve_zero_energy(RadialPotential::hard_core(1.0))) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dilation scales the scattering length") {
  const auto v = RadialPotential::soft_sphere(1.0, 5.0);
  const double a = solve_zero_energy(v).a;
  for (double lam : {0.25, 3.0}) CHECK(solve_zero_energy(dilate_potential(v, lam)).a == doctest::Approx(lam * a).epsilon(1e-8));
  const auto scaled = scale_potential(dilate_potential(v, 1.0 / a), 0.01);
  CHECK(solve_zero_energy(scaled).a == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("tabulated soft sphere converges to the closed form") {
  std::vector<double> r, v;
  for (int i = 1; i <= 400; ++i) {
    r.push_back(i / 400.0);
    v.push_back(10.0);
  }
  const auto tab = RadialPotential::tabulated(r, v);
  CHECK(tab.R0 == 1.0);
  CHECK(solve_zero_energy(tab).a == doctest::Approx(soft_sphere_a_3d(1.0, 10.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("potential files round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "bosegas_pot_test.txt";
  const auto v = RadialPotential::tabulated({0.2, 0.6, 1.5}, {3.0, 1.0 / 3.0, 0.1}, 3);
  save_potential(v, path.string());
  const auto w = load_potential(path.string());
  CHECK(w.r == v.r);
  CHECK(w.v == v.v);
  CHECK(w.R0 == v.R0);
  CHECK(w.dimension == 3);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_potential("/nonexistent/dir/pot.txt"), IoError);
}
