#include <doctest.h>

#include <cmath>
#include <random>

#include "bosegas/numerics.hpp"
#include "bosegas/radial_functional.hpp"

using namespace bosegas;
using num::pi;

TEST_CASE("spacings hit their endpoints") {
  const auto l = num::linspace(-1, 3, 5);
  CHECK(l.front() == -1);
  CHECK(l[2] == doctest::Approx(1));
  CHECK(l.back() == 3);
  const auto g = num::logspace(1e-3, 1e3, 7);
  CHECK(g[3] == doctest::Approx(1.0));
  CHECK(g.back() == doctest::Approx(1e3));
}

TEST_CASE("line fit recovers exact slope") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(-0.75 * v + 2);
  const auto f = num::fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(2).epsilon(1e-14));
}

TEST_CASE("Simpson is exact on quadratics with uneven nodes") {
  std::vector<double> x{0, 0.1, 0.35, 0.5, 0.9, 1.0, 1.7, 1.8}, f;
  for (double v : x) f.push_back(3 * v * v - 2 * v + 0.5);
  auto F = [](double v) { return v * v * v - v * v + 0.5 * v; };
  // even and odd interval counts (the latter uses the trailing quadratic)
  CHECK(num::simpson(x, f, 0, 6) == doctest::Approx(F(1.7)).epsilon(1e-13));
  CHECK(num::simpson(x, f, 0, 7) == doctest::Approx(F(1.8)).epsilon(1e-13));
  CHECK(num::simpson(x, f, 2, 5) == doctest::Approx(F(1.0) - F(0.35)).epsilon(1e-13));
}

TEST_CASE("tridiagonal solve matches a direct product") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  const int n = 40;
  std::vector<double> a(n), b(n), c(n), x(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    a[i] = U(rng);
    c[i] = U(rng);
    b[i] = 4 + U(rng);
    x[i] = U(rng);
  }
  for (int i = 0; i < n; ++i) rhs[i] = b[i] * x[i] + (i ? a[i] * x[i - 1] : 0) + (i + 1 < n ? c[i] * x[i + 1] : 0);
  const auto y = num::solve_tridiagonal(a, b, c, rhs);
  for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("root finders") {
  CHECK(num::find_root([](double x) { return std::cos(x) - x; }, 0, 1) ==
        doctest::Approx(0.7390851332151607).epsilon(1e-14));
  CHECK(num::find_root_expanding([](double x) { return x * x - 1e6; }, 1, 2) == doctest::Approx(1e3).epsilon(1e-14));
}

TEST_CASE("quadratures against closed forms") {
  // endpoint singularity
  CHECK(num::integrate_tanh_sinh([](double x) { return 1 / std::sqrt(x); }, 0, 1) == doctest::Approx(2).epsilon(1e-12));
  CHECK(num::integrate_exp_sinh([](double x) { return std::exp(-x * x); }, 0) ==
        doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-12));
  CHECK(num::integrate_gk([](double x) { return std::sin(x); }, 0, pi) == doctest::Approx(2).epsilon(1e-13));
}

TEST_CASE("Lanczos finds the lowest eigenvalue of the discrete Laplacian") {
  const int n = 300;
  auto apply = [n](const std::vector<double>& v, std::vector<double>& out) {
    out.assign(n, 0);
    for (int i = 0; i < n; ++i) out[i] = 2 * v[i] - (i ? v[i - 1] : 0) - (i + 1 < n ? v[i + 1] : 0);
  };
  const auto r = num::lanczos_lowest(apply, std::vector<double>(n, 1.0));
  CHECK(r.converged);
  CHECK(r.eigenvalue == doctest::Approx(2 - 2 * std::cos(pi / (n + 1))).epsilon(1e-8));
}

TEST_CASE("radial flow reproduces the harmonic oscillator ground state") {
  const auto grid = make_radial_grid(3, 2000, 8.0);
  RadialFunctional f;
  f.grid = &grid;
  f.V.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f.V[i] = grid.r[i] * grid.r[i];
  f.term = zero_term();
  std::vector<double> phi0(grid.size(), 1.0);
  const auto res = minimize_normalized(f, 1.0, phi0);
  CHECK(res.converged);
  CHECK(res.energy == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(f.mass(res.phi) == doctest::Approx(1.0).epsilon(1e-12));
  // descent along the flow
  for (std::size_t i = 1; i < res.history.size(); ++i) CHECK(res.history[i] <= res.history[i - 1] + 1e-12);
}
