#include <doctest.h>

#include <cmath>

#include "bosegas/charged.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"

using namespace bosegas;
using num::pi;

namespace {

// Rationalised form: (1 + x^4)^2 - x^4 (2 + x^4) = 1.
double x_integrand(double x) { return 1 / (1 + x * x * x * x + x * x * std::sqrt(2 + x * x * x * x)); }

// Composite Simpson on [0, X] plus the 1/(2 x^4) tail.
double x_integral_simpson() {
  const double X = 60;
  const int n = 600000;
  const double h = X / n;
  double s = x_integrand(0) + x_integrand(X);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * x_integrand(i * h);
  return s * h / 3 + 1 / (6 * X * X * X);
}

}  // namespace

TEST_CASE("Bogolubov bound values") {
  CHECK(bogolubov_bound({1, 1, 0}) == doctest::Approx(std::sqrt(3.0) - 2).epsilon(1e-14));
  CHECK(bogolubov_bound({1, 1, 0}) == doctest::Approx(-0.267949192).epsilon(1e-8));
  CHECK(bogolubov_bound({2, 0, 0}) == 0.0);
  CHECK(bogolubov_bound({1, 0.4, 0.6}) == bogolubov_bound({1, 1.0, 0}));
  // small B: -B^2 / (2 (A + B)) to leading order
  CHECK(bogolubov_bound({1, 1e-4, 0}) == doctest::Approx(-0.5e-8 / (1 + 1e-4)).epsilon(1e-4));
  CHECK(bogolubov_bound({0, 3, 0}) == doctest::Approx(-3.0));
  CHECK_THROWS_AS(bogolubov_bound({-1, 0.5, 0}), PreconditionError);
}

TEST_CASE("x-integral by two independent paths") {
  const auto c = foldy_constant(1.0);
  const double ref = x_integral_simpson();
  CHECK(c.x_integral_closed == doctest::Approx(ref).epsilon(1e-9));
  CHECK(c.x_integral_quadrature == doctest::Approx(ref).epsilon(1e-9));
  CHECK(c.x_integral_closed == doctest::Approx(0.8060094627).epsilon(1e-9));
  for (double x : {0.0, 0.3, 2.0, 50.0, 1e4}) CHECK(foldy_integrand(x) == doctest::Approx(x_integrand(x)).epsilon(1e-13));
}

TEST_CASE("Foldy constant and law") {
  const double r = std::tgamma(0.75) / std::tgamma(1.25);
  CHECK(foldy_constant(1.0).I0 == doctest::Approx(0.4 * r * std::pow(2 / pi, 0.25)).epsilon(1e-14));
  CHECK(foldy_constant(16.0).I0 / foldy_constant(1.0).I0 == doctest::Approx(0.5).epsilon(1e-14));
  const auto law = foldy_law(81.0, 1.0);
  CHECK(law.energy_per_particle == doctest::Approx(-3 * foldy_constant(1.0).I0).epsilon(1e-14));
  CHECK(law.exponent == 0.25);
  CHECK_FALSE(law.jellium.has_value());
  const auto j = foldy_law(8.0, 1.0, 2.0, 3.0);
  REQUIRE(j.jellium.has_value());
  CHECK(*j.jellium == doctest::Approx(2.0 * 32 - 3.0 * 16).epsilon(1e-12));
  CHECK_THROWS_AS(foldy_law(8.0, 1.0, 2.0), PreconditionError);
  CHECK_THROWS_AS(foldy_constant(0.0), PreconditionError);
}

TEST_CASE("local energy integrand and closed form") {
  // P + Q - sqrt((P + Q)^2 - P^2) = P^2 / (P + Q + sqrt((P + Q)^2 - P^2))
  for (double k : {0.01, 1.0, 30.0}) {
    const double P = 4 * pi * 2.0 / (k * k), Q = 0.5 * 1.5 * 1.5 * 1.5 * k * k;
    const double S = P + Q;
    CHECK(local_energy_integrand(k, 2.0, 1.5, 0.5) == doctest::Approx(k * k * P * P / (S + std::sqrt(S * S - P * P))).epsilon(1e-12));
  }
  const auto one = local_energy_integral(1, 1, 1);
  CHECK(one.quadrature == doctest::Approx(one.closed_form).epsilon(1e-7));
  CHECK(one.closed_form == doctest::Approx(-std::sqrt(2.0) * std::pow(pi, -0.75) * foldy_constant(1).x_integral_closed).epsilon(1e-14));
  CHECK(local_energy_integral(16, 1, 1).quadrature / one.quadrature == doctest::Approx(32).epsilon(1e-7));
  CHECK(local_energy_integral(1, 2, 1).quadrature / one.quadrature == doctest::Approx(std::pow(2.0, -0.75)).epsilon(1e-7));
  CHECK(local_energy_integral(1, 1, 81).quadrature / one.quadrature == doctest::Approx(1.0 / 3).epsilon(1e-7));
}

TEST_CASE("Dyson functional minimiser") {
  const auto& d = dyson_functional_minimize(1.0);
  CHECK(d.E_star < 0);
  CHECK(d.E_star == doctest::Approx(d.kinetic - d.potential).epsilon(1e-10));
  CHECK(d.virial_residual < 1e-3);
  CHECK(d.boundary_mass < 1e-12);
  std::vector<double> f(d.r.size());
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    f[i] = 4 * pi * d.r[i] * d.r[i] * d.Phi[i] * d.Phi[i];
    CHECK(d.Phi[i] >= 0);
  }
  // independent rule on the same nodes; agreement limited by the grid
  CHECK(num::simpson(d.r, f, 0, d.r.size() - 1) == doctest::Approx(1.0).epsilon(1e-4));
  for (std::size_t i = 1; i < d.energy_history.size(); ++i) CHECK(d.energy_history[i] <= d.energy_history[i - 1] + 1e-12);
  // dilation: E* ~ mu^-3/5 I0^8/5 with I0 ~ mu^-1/4, so E* ~ 1/mu
  CHECK(dyson_functional_minimize(2.0).E_star == doctest::Approx(d.E_star / 2).epsilon(1e-4));
  // cached by value
  CHECK(&dyson_functional_minimize(1.0) == &d);
}

TEST_CASE("two-component scaling and the heuristic") {
  const auto a = two_component_energy(1000, 1), b = two_component_energy(2000, 1);
  CHECK(b.energy / a.energy == doctest::Approx(std::pow(2.0, 1.4)).epsilon(1e-12));
  CHECK(a.energy == doctest::Approx(std::pow(1000.0, 1.4) * dyson_functional_minimize(1.0).E_star).epsilon(1e-12));
  CHECK(a.L == doctest::Approx(std::pow(1000.0, -0.2)).epsilon(1e-12));
  CHECK(a.ell_cor == doctest::Approx(std::pow(1000.0, -0.4)).epsilon(1e-12));
  // stationary point of N L^-2 - N^{5/4} L^{-3/4}
  for (double N : {1.0, 1e3}) {
    const auto h = dyson_heuristic(N);
    const double L = std::pow(8.0 / 3, 0.8) * std::pow(N, -0.2);
    CHECK(h.L == doctest::Approx(L).epsilon(1e-8));
    CHECK(h.energy == doctest::Approx(N / (L * L) - std::pow(N, 1.25) * std::pow(L, -0.75)).epsilon(1e-10));
  }
}
