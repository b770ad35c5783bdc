#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/onedim.hpp"

using namespace bosegas;
using num::pi;

namespace {

const LLCurve& curve() { return LLCurve::standard(); }

}  // namespace

TEST_CASE("harmonic transverse mode") {
  const auto m = transverse_mode(TransverseKind::harmonic, 0.1, 1e-4);
  CHECK(m.e_perp_unit == doctest::Approx(2.0));
  CHECK(m.e_perp == doctest::Approx(200.0));
  CHECK(m.int_b4_unit == doctest::Approx(1 / (2 * pi)).epsilon(1e-14));
  CHECK(m.g == doctest::Approx(4e-4 / 0.01).epsilon(1e-12));
  // normalisation and quartic moment by direct quadrature
  const double n2 = num::integrate_exp_sinh([&](double x) { return 2 * pi * x * std::pow(m.b(x), 2); }, 0);
  const double n4 = num::integrate_exp_sinh([&](double x) { return 2 * pi * x * std::pow(m.b(x), 4); }, 0);
  CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n4 == doctest::Approx(m.int_b4_unit).epsilon(1e-10));
}

TEST_CASE("hard-wall transverse mode") {
  const double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
  const auto m = transverse_mode(TransverseKind::hard_wall, 1.0, 1e-3);
  CHECK(m.e_perp_unit == doctest::Approx(j01 * j01).epsilon(1e-14));
  // midpoint rule on the disc, independent of the library quadrature
  const int n = 200000;
  double n2 = 0, n4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n, b = m.b(x);
    n2 += 2 * pi * x * b * b / n;
    n4 += 2 * pi * x * b * b * b * b / n;
  }
  CHECK(n2 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m.int_b4_unit == doctest::Approx(n4).epsilon(1e-8));
  CHECK(m.b(1.5) == 0.0);
  CHECK(m.g == doctest::Approx(8 * pi * 1e-3 * n4).epsilon(1e-8));
}

TEST_CASE("trap validation and warnings") {
  ElongatedTrap t;
  CHECK(t.warnings().empty());
  t.r = 2.0;
  t.a = 3.0;
  CHECK(t.warnings().size() == 2);
  t.N = 0.5;
  CHECK_THROWS_AS(t.validate(), PreconditionError);
  CHECK(std::isinf(longitudinal_potential(0.6, 1.0, INFINITY)));
  CHECK(longitudinal_potential(0.4, 1.0, INFINITY) == 0.0);
  CHECK(longitudinal_potential(-0.5, 2.0, 2) == doctest::Approx(0.0625 / 4));
}

TEST_CASE("closed forms in a box") {
  const double N = 40, L = 3, g = 0.7;
  // gt: uniform density, (pi^2/3) rho^3 L
  CHECK(minimize_1d(Functional1D::gt, N, L, g, INFINITY).E == doctest::Approx(pi * pi * N * N * N / (3 * L * L)).epsilon(1e-10));
  const auto tf = minimize_1d(Functional1D::tf1d, N, L, g, INFINITY);
  CHECK(tf.E == doctest::Approx(0.5 * g * N * N / L).epsilon(1e-10));
  CHECK(tf.rho_bar == doctest::Approx(N / L).epsilon(1e-10));
  // no interaction: the box ground state
  CHECK(minimize_1d(Functional1D::gp1d, N, L, 0, INFINITY).E == doctest::Approx(N * pi * pi / (L * L)).epsilon(1e-5));
}

TEST_CASE("harmonic closed forms") {
  const double N = 10, L = 2, g = 0.4;
  // V = z^2 / L^4: oscillator frequency 1 / L^2
  CHECK(minimize_1d(Functional1D::gp1d, N, L, 0, 2).E == doctest::Approx(N / (L * L)).epsilon(1e-5));
  // tf1d: N = (4/3) m^{3/2} L^2 / g
  CHECK(minimize_1d(Functional1D::tf1d, N, L, g, 2).mu == doctest::Approx(std::pow(0.75 * g * N / (L * L), 2.0 / 3)).epsilon(1e-10));
  // gt: rho = sqrt(m - V) / pi, N = m L^2 / 2
  const auto gt = minimize_1d(Functional1D::gt, N, L, g, 2);
  CHECK(gt.mu == doctest::Approx(2 * N / (L * L)).epsilon(1e-10));
  CHECK(gt.profile.mass == N);
}

TEST_CASE("scaling identities") {
  const double N = 30, L = 1.5, g = 0.2, s = 4;
  const auto gp = minimize_1d(Functional1D::gp1d, N, L, g, s);
  CHECK(gp.E == doctest::Approx(N / (L * L) * minimize_1d(Functional1D::gp1d, 1, 1, N * g * L, s).E).epsilon(1e-8));
  const auto tf = minimize_1d(Functional1D::tf1d, N, L, g, s);
  CHECK(tf.E == doctest::Approx(N / (L * L) * minimize_1d(Functional1D::tf1d, 1, 1, N * g * L, s).E).epsilon(1e-9));
  const double gam = (N / L) * std::pow(N, -2 / (s + 2));
  const auto ll = minimize_1d(Functional1D::ll_no_grad, N, L, g, s, &curve());
  CHECK(ll.E == doctest::Approx(N * gam * gam * minimize_1d(Functional1D::ll_no_grad, 1, 1, g / gam, s, &curve()).E).epsilon(1e-6));
  const auto gt = minimize_1d(Functional1D::gt, N, L, g, s);
  CHECK(gt.E == doctest::Approx(N * gam * gam * minimize_1d(Functional1D::gt, 1, 1, g, s).E).epsilon(1e-9));
}

TEST_CASE("ordering of the functionals") {
  // e(t) <= t/2 and e(t) <= pi^2/3; gradients only add energy
  for (double g : {0.05, 1.0, 20.0}) {
    const double N = 20, L = 1, s = 2;
    const double full = minimize_1d(Functional1D::full, N, L, g, s, &curve()).E;
    CHECK(minimize_1d(Functional1D::ll_no_grad, N, L, g, s, &curve()).E <= full);
    CHECK(full <= minimize_1d(Functional1D::gp1d, N, L, g, s).E * (1 + 1e-9));
    CHECK(minimize_1d(Functional1D::tf1d, N, L, g, s).E <= minimize_1d(Functional1D::gp1d, N, L, g, s).E);
  }
}

TEST_CASE("gradient flow converges and descends") {
  const auto r = minimize_1d(Functional1D::full, 50, 1, 3.0, 2, &curve());
  CHECK(r.residual < 1e-6 * r.mu);
  for (std::size_t i = 1; i < r.energy_history.size(); ++i) CHECK(r.energy_history[i] <= r.energy_history[i - 1] * (1 + 1e-12));
  CHECK(r.profile.mass == doctest::Approx(50).epsilon(1e-10));
  CHECK_THROWS_AS(minimize_1d(Functional1D::full, 50, 1, 3.0, 2), PreconditionError);
  CHECK_THROWS_AS(minimize_1d(Functional1D::tf1d, 50, 1, 0.0, 2), PreconditionError);
}

TEST_CASE("ratio classifier probes") {
  CHECK(classify_ratio(1e-8, 100).region == 1);
  CHECK(classify_ratio(1e-4, 100).region == 2);
  CHECK(classify_ratio(1e-3, 1e4).region == 3);
  CHECK(classify_ratio(1.0, 100).region == 4);
  CHECK(classify_ratio(1e3, 100).region == 5);
  const auto few = classify_ratio(0.5, 1);
  CHECK(few.ambiguous);
  CHECK(few.region == 2);
  CHECK(few.alternative == 4);
  CHECK(classify_ratio(0.5, 100).ratio_scaled == doctest::Approx(5000));
  RegimeThresholds bad;
  bad.much_more = 0.5;
  CHECK_THROWS_AS(classify_ratio(1.0, 10, bad), PreconditionError);
}

TEST_CASE("trap classification") {
  ElongatedTrap t;
  t.N = 100;
  t.L = 1;
  t.r = 1e-3;
  t.a = 1e-6;
  const auto rep = regime_classify(t, {}, &curve());
  CHECK(rep.passes == 2);
  CHECK(rep.g == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rep.ratio == doctest::Approx(rep.g / rep.rho_bar));
  CHECK(rep.region >= 1);
  CHECK(rep.region <= 5);
  CHECK(rep.valid);
  // dense strongly coupled gas lands in the hard-core region
  t.a = 1e-4;
  t.N = 10;
  CHECK(regime_classify(t, {}, &curve()).region == 5);
  t.a = 0;
  CHECK_THROWS_AS(regime_classify(t, {}, &curve()), PreconditionError);
}

TEST_CASE("box bounds on the 1D energy") {
  const double n = 10, ell = 1, r = 1e-3, a = 1e-9;
  const auto b = box_bounds_1d(n, ell, r, a, 5.0, 6.0, 0.5);
  const double q = std::pow(a / r, 0.125);
  CHECK(b.lower_factor == doctest::Approx(1 - 0.5 * n * q * (1 + n * r / ell * q)).epsilon(1e-14));
  CHECK(b.bracket == doctest::Approx(std::pow(n * a / r, 2) * (1 + a * ell / (r * r))).epsilon(1e-14));
  CHECK(b.lower == doctest::Approx(5.0 * b.lower_factor));
  CHECK(b.upper == doctest::Approx(6.0 * (1 + 0.5 * std::cbrt(b.bracket))));
  CHECK(b.lower <= b.upper);
  CHECK_THROWS_AS(box_bounds_1d(1e3, ell, 1e-3, 1e-6, 1, 1), PreconditionError);
  CHECK_THROWS_AS(box_bounds_1d(n, ell, r, a, 2.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(box_bounds_1d(n, ell, r, 2e-3, 1.0, 1.0), PreconditionError);
}
