#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bosegas/errors.hpp"
#include "bosegas/homogeneous_bounds.hpp"
#include "bosegas/numerics.hpp"

using namespace bosegas;
using num::pi;

namespace {

GasState3D gas_at(double Y, double a = 1.0, double mu = 1.0) { return {3 * Y / (4 * pi * a * a * a), a, mu}; }

}  // namespace

TEST_CASE("diluteness parameter and length scales") {
  GasState3D s{1e-3, 0.5, 1.0};
  CHECK(s.Y() == doctest::Approx(4 * pi * 1e-3 * 0.125 / 3));
  const auto ls = length_scales(1e-6, 1.0, 3);
  CHECK(ls.mean_spacing == doctest::Approx(100.0));
  CHECK(ls.healing == doctest::Approx(1000.0));
  CHECK(ls.dilute);
  CHECK_FALSE(length_scales(2.0, 1.0, 3).dilute);
  CHECK_THROWS_AS(GasState3D({-1.0, 1.0, 1.0}).validate(), PreconditionError);
}

TEST_CASE("printed constants") {
  CHECK(dyson_lower_constant() == 1.0 / (10 * std::sqrt(2.0)));
  CHECK(lhy_first_coefficient() == doctest::Approx(128 / (15 * std::sqrt(pi))).epsilon(1e-15));
  CHECK(lhy_second_coefficient() == doctest::Approx(8 * (4 * pi / 3 - std::sqrt(3.0))).epsilon(1e-15));
}

TEST_CASE("3D bounds bracket the LHY reference in the dilute range") {
  for (double Y : num::logspace(1e-9, 1e-4, 60)) {
    const auto s = gas_at(Y);
    const double lead = 4 * pi * s.rho * s.a;
    const double lhy = lhy_reference(s);
    CHECK(lower_bound_3d(s).value <= lhy);
    CHECK(lhy <= upper_bound_3d(s));
    CHECK(lhy / lead - 1 == doctest::Approx(128 / (15 * std::sqrt(pi)) * std::sqrt(s.rho)).epsilon(0.05));
  }
}

TEST_CASE("lower bound is clamped at zero and otherwise linear in the correction") {
  const auto s = gas_at(1e-30);
  const auto lb = lower_bound_3d(s);
  CHECK_FALSE(lb.clamped);
  CHECK(lb.value == doctest::Approx(4 * pi * s.rho * (1 - 8.9 * std::pow(1e-30, 1.0 / 17))).epsilon(1e-14));
  const auto big = lower_bound_3d(gas_at(1e-6));
  CHECK(big.clamped);
  CHECK(big.value == 0.0);
  CHECK(big.raw < 0);
}

TEST_CASE("error exponents of the 3D bounds") {
  std::vector<double> Ys = num::logspace(1e-12, 1e-6, 13), lx, lo, up;
  for (double Y : Ys) {
    const auto s = gas_at(Y);
    const double lead = 4 * pi * s.rho * s.a;
    lx.push_back(std::log(Y));
    lo.push_back(std::log(1 - lower_bound_3d(s).raw / lead));
    up.push_back(std::log(upper_bound_3d(s) / lead - 1));
  }
  CHECK(num::fit_line(lx, lo).slope == doctest::Approx(1.0 / 17).epsilon(1e-10));
  CHECK(num::fit_line(lx, up).slope == doctest::Approx(1.0 / 3).epsilon(0.05));
}

TEST_CASE("finite-box upper bound") {
  GasState3D s{1e-3, 1.0, 1.0};
  // x = a/b: (1 - x + x^2 + x^3/2) / (1 - x)^8
  const double b = 4.0, x = 0.25;
  CHECK(upper_bound_3d(s, b) == doctest::Approx(4 * pi * 1e-3 * (1 - x + x * x + 0.5 * x * x * x) / std::pow(1 - x, 8)));
  CHECK(upper_bound_3d(s, b, true, 2.0) ==
        doctest::Approx(4 * pi * 1e-3 * (1 - x * x + 0.5 * x * x * x) / std::pow(1 - x, 4)));
  CHECK_THROWS_AS(upper_bound_3d(s, 0.5), PreconditionError);
  CHECK_THROWS_AS(upper_bound_3d(s, 1.5, true, 2.0), PreconditionError);
  // both forms approach the leading term as b grows
  CHECK(upper_bound_3d(s, 1e8) / (4 * pi * 1e-3) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("K factor decreases in n and signals an invalid Temple denominator") {
  double prev = INFINITY;
  for (double n : {2.0, 4.0, 8.0, 16.0}) {
    const auto K = K_factor(n, 100.0, 2.0, 1.0, 0.5, 1e-3);
    REQUIRE(K.has_value());
    CHECK(*K < prev);
    prev = *K;
  }
  CHECK_FALSE(K_factor(1000, 10.0, 2.0, 1.0, 0.01, 1.0).has_value());
  const auto bb = finite_box_lower_bound(1000, 10.0, 2.0, 1.0, 0.01, {1.0, 1.0, 1.0});
  CHECK(bb.trivial);
  CHECK(bb.value == 0);
}

TEST_CASE("cell method with automatic parameters stays below the leading term") {
  for (double Y : {1e-20, 1e-15, 1e-12}) {
    const auto s = gas_at(Y);
    const auto p = auto_box_parameters(s, 0.5 * s.a);
    CHECK(p.eps == doctest::Approx(std::pow(Y, 1.0 / 17)));
    CHECK(s.a / p.ell == doctest::Approx(std::pow(Y, 6.0 / 17)));
    const auto lb = cell_method_lower_bound(s, 0.5 * s.a, p);
    CHECK(lb.value <= 4 * pi * s.rho * s.a);
    CHECK(lb.value >= 0);
  }
}

TEST_CASE("2D bounds approach the leading term") {
  double prev = INFINITY;
  for (double y : {1e-10, 1e-20, 1e-40, 1e-80}) {
    GasState2D s{y, 1.0, 1.0};
    const auto b = bounds_2d(s);
    CHECK(b.leading == doctest::Approx(4 * pi * y / std::abs(std::log(y))));
    CHECK(b.lower <= b.upper);
    const double gap = b.upper / b.leading - 1;
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 0.05);
  CHECK_THROWS_AS(bounds_2d({1e-4, 1.0, 1.0}, 0.5), PreconditionError);
}

TEST_CASE("nu(R) closed form against quadrature") {
  for (double a : {0.3, 1.0}) {
    const double R0 = 1.0, R = 7.5;
    const double q = num::integrate_gk([a](double r) { return std::log(r / a) * r; }, R0, R);
    CHECK(nu_2d(R, R0, a) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("soft potentials are normalised") {
  const auto U = soft_potential(3.0, 1.0, 3, 0.8);
  CHECK(U.normalization == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(U(2.0) == doctest::Approx(3.0 / (27.0 - 1.0)));
  CHECK(U(0.5) == 0.0);
  CHECK(U(3.5) == 0.0);
  const auto U2 = soft_potential(5.0, 1.0, 2, 0.5);
  CHECK(U2.normalization == doctest::Approx(1.0).epsilon(1e-12));
  const auto A = annulus_potential(1.5, 2.5, 3, 1.0);
  CHECK(A.normalization == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Dyson lemma holds for trial functions vanishing in the core") {
  const auto hc = RadialPotential::hard_core(1.0);
  const double R = 2.0, R1 = 3.0;
  const auto U = soft_potential(R, 1.0, 3, 1.0);
  const auto r = num::linspace(0, R1, 3001);
  auto samples = [&](auto f, auto df) {
    RadialSamples s;
    s.r = r;
    for (double x : r) {
      s.f.push_back(x <= 1 ? 0.0 : f(x));
      s.df.push_back(x <= 1 ? 0.0 : df(x));
    }
    return s;
  };
  CHECK(dyson_lemma_residual(samples([](double x) { return 1 - 1 / x; }, [](double x) { return 1 / (x * x); }), hc, U, R1) >= 0);
  CHECK(dyson_lemma_residual(samples([](double x) { return std::sqrt(x - 1); }, [](double x) { return 0.5 / std::sqrt(x - 1); }),
                             hc, U, R1) >= 0);
  CHECK(dyson_lemma_residual(samples([](double x) { return std::tanh(3 * (x - 1)); },
                                     [](double x) { return 3 / std::pow(std::cosh(3 * (x - 1)), 2); }),
                             hc, U, R1) >= 0);
  // a function that does not vanish inside the hard core has infinite energy
  RadialSamples bad;
  bad.r = r;
  bad.f.assign(r.size(), 1.0);
  bad.df.assign(r.size(), 0.0);
  CHECK(std::isinf(dyson_lemma_residual(bad, hc, U, R1)));
}

TEST_CASE("2D Dyson lemma for the logarithmic solution") {
  const auto hd = RadialPotential::hard_core(1.0, 2);
  const double R = 200.0;
  const auto U = soft_potential(R, 1.0, 2, 1.0);
  RadialSamples s;
  s.r = num::linspace(0, R, 40001);
  for (double x : s.r) {
    s.f.push_back(x <= 1 ? 0.0 : std::log(x));
    s.df.push_back(x <= 1 ? 0.0 : 1 / x);
  }
  CHECK(dyson_lemma_residual(s, hd, U, R) >= 0);
}

TEST_CASE("Temple bound never exceeds the ground energy") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> G;
  int checked = 0;
  for (int c = 0; c < 2000; ++c) {
    Eigen::MatrixXcd H(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) H(i, j) = {G(rng), G(rng)};
    H = (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    Eigen::VectorXcd psi = es.eigenvectors().col(0) + 0.3 * Eigen::VectorXcd::Random(5);
    psi.normalize();
    const Eigen::VectorXcd Hp = H * psi;
    const double h = psi.dot(Hp).real();
    if (!(es.eigenvalues()(1) > h)) continue;
    ++checked;
    CHECK(temple_bound(h, Hp.squaredNorm(), es.eigenvalues()(1)) <= es.eigenvalues()(0) + 1e-10);
  }
  CHECK(checked > 1000);
  // exact eigenvector: zero variance
  CHECK(temple_bound(2.0, 4.0, 5.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(temple_bound(2.0, 5.0, 1.0), PreconditionError);
}

TEST_CASE("cell distribution closed form against brute force") {
  for (int k = 1; k <= 5; ++k) {
    CHECK(cell_distribution_min(k, 4 * k).value == doctest::Approx(k * (k - 1.0)));
    for (int p = 1; p <= 4 * k + 4; ++p) {
      const double closed = cell_distribution_min(k, p).value;
      const double brute = cell_distribution_brute(k, p);
      if (p >= 4 * k) CHECK(closed == doctest::Approx(brute).epsilon(1e-12));
      else CHECK(closed <= brute + 1e-12);
    }
  }
}

TEST_CASE("lemma margin") {
  for (double b : {0.1, 0.5, 0.9}) {
    const double lb = -std::log(b);
    CHECK(lemma_xb_margin(b, b, 1.0) == doctest::Approx(b * b / lb / (4 * lb * lb)).epsilon(1e-12));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1), K(1, 20);
  double worst = INFINITY;
  for (int i = 0; i < 100000; ++i) {
    const double x = U(rng), b = U(rng);
    if (x == 0 || b == 0) continue;
    worst = std::min(worst, lemma_xb_margin(x, b, K(rng)));
  }
  CHECK(worst >= -1e-12);
  // b close to 1 stays finite
  CHECK(std::isfinite(lemma_xb_margin(0.5, 1 - 1e-12, 1.0)));
  CHECK_THROWS_AS(lemma_xb_margin(1.5, 0.5, 1.0), PreconditionError);
}
