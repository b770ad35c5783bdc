#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "bosegas/lieb_liniger.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/oracles.hpp"

using namespace bosegas;
using num::pi;

TEST_CASE("printed asymptotics") {
  const auto& c = LLCurve::standard();
  CHECK(ll_energy_density(0.0) == 0.0);
  CHECK(c.e(INFINITY) == doctest::Approx(pi * pi / 3));
  CHECK(c.de(INFINITY) == 0.0);
  CHECK(std::abs(c.e(1e3) * 3 / (pi * pi) - 1) < 0.02);
  CHECK(std::abs(c.e(1e-2) / 5e-3 - 1) < 0.05);
  // the corrections shrink toward both limits
  CHECK(std::abs(c.e(1e5) * 3 / (pi * pi) - 1) < std::abs(c.e(1e3) * 3 / (pi * pi) - 1));
  CHECK(std::abs(c.e(1e-4) / 5e-5 - 1) < std::abs(c.e(1e-2) / 5e-3 - 1));
}

TEST_CASE("e(t) is bounded by both limits on the whole grid") {
  const auto& c = LLCurve::standard();
  CHECK(c.t_nodes().size() == 200);
  for (std::size_t i = 0; i < c.t_nodes().size(); ++i) {
    const double t = c.t_nodes()[i], e = c.e_nodes()[i];
    CHECK(e >= 0);
    CHECK(e <= std::min(t / 2, pi * pi / 3) * (1 + 1e-9));
    if (i) CHECK(e > c.e_nodes()[i - 1]);
  }
}

TEST_CASE("interpolation agrees with direct solves between nodes") {
  const auto& c = LLCurve::standard();
  for (double t : {3.3e-4, 0.037, 0.5, 2.2, 17.0, 640.0, 3.1e4}) CHECK(c.e(t) == doctest::Approx(ll_energy_density(t)).epsilon(1e-6));
}

TEST_CASE("curve slopes match finite differences") {
  const auto& c = LLCurve::standard();
  for (double t : {1e-3, 0.1, 3.0, 100.0}) {
    const double h = 1e-4 * t;
    CHECK(c.de(t) == doctest::Approx((c.e(t + h) - c.e(t - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("rho^3 e(g/rho) is convex in rho") {
  const auto& c = LLCurve::standard();
  for (double g : {0.1, 1.0, 10.0}) {
    const auto rho = num::linspace(1e-3, 50.0, 4000);
    double worst = INFINITY;
    for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
      auto f = [&](double r) { return r * r * r * c.e(g / r); };
      worst = std::min(worst, f(rho[i + 1]) - 2 * f(rho[i]) + f(rho[i - 1]));
    }
    CHECK(worst >= -1e-8);
  }
}

TEST_CASE("fixed-coupling solve is self-consistent") {
  const auto p = ll_solve_lambda(1.0);
  const auto q = ll_solve_gamma(p.gamma);
  CHECK(q.lambda == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(q.e_gamma == doctest::Approx(p.e_gamma).epsilon(1e-10));
  // e(t) = e_gamma at t = 2 gamma
  CHECK(ll_energy_density(2 * p.gamma) == doctest::Approx(p.e_gamma).epsilon(1e-8));
}

TEST_CASE("two particles on a ring reproduce e(t) after extrapolation") {
  // rho = 1 with n particles on a ring of length n; energy per particle is e(t)
  const double t = 10.0;
  const double e2 = exact_diag_delta_gas_1d(2, 2, t, Boundary::periodic).E0 / 2;
  const double e3 = exact_diag_delta_gas_1d(3, 3, t, Boundary::periodic).E0 / 3;
  CHECK((9 * e3 - 4 * e2) / 5 == doctest::Approx(LLCurve::standard().e(t)).epsilon(5e-3));
}

TEST_CASE("curve CSV round-trips exactly") {
  const auto& c = LLCurve::standard();
  const auto path = std::filesystem::temp_directory_path() / "bosegas_ll_test.csv";
  c.write_csv(path.string());
  const auto d = LLCurve::read_csv(path.string());
  CHECK(d.t_nodes() == c.t_nodes());
  CHECK(d.e_nodes() == c.e_nodes());
  CHECK(d.e(0.123) == c.e(0.123));
  std::filesystem::remove(path);
}

TEST_CASE("a small custom curve") {
  const auto c = LLCurve::build(40, 1e-2, 1e2);
  CHECK(c.t_nodes().size() == 40);
  CHECK(c.e(1.0) == doctest::Approx(ll_energy_density(1.0)).epsilon(1e-4));
}
