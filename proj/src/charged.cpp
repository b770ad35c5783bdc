#include "bosegas/charged.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/radial_functional.hpp"

namespace bosegas {

using num::pi;

void BogolubovParams::validate() const {
  require(A >= 0 && B_plus >= 0 && B_minus >= 0, "A, B_plus and B_minus must be nonnegative");
  require(std::isfinite(A) && std::isfinite(B_plus) && std::isfinite(B_minus), "Bogolubov parameters must be finite");
}

double bogolubov_bound(const BogolubovParams& p) {
  p.validate();
  const double B = p.B_plus + p.B_minus;
  const double S = p.A + B;
  if (B == 0) return 0.0;
  // -(S) + sqrt(S^2 - B^2) = -B^2 / (S + sqrt(S^2 - B^2))
  return -B * B / (S + std::sqrt(p.A * (p.A + 2 * B)));
}

double foldy_integrand(double x) {
  const double x2 = x * x;
  const double x4 = x2 * x2;
  // (1 + x^4)^2 - x^4 (2 + x^4) = 1
  return 1.0 / (1.0 + x4 + x2 * std::sqrt(2.0 + x4));
}

FoldyConstant foldy_constant(double mu) {
  require(mu > 0 && std::isfinite(mu), "mu must be positive");
  FoldyConstant c;
  const double ratio = std::tgamma(0.75) / std::tgamma(1.25);
  c.I0 = 0.4 * ratio * std::pow(2.0 / (mu * pi), 0.25);
  c.x_integral_closed = std::pow(2.0, 0.75) * std::sqrt(pi) * ratio / 5.0;
  const double head = num::integrate_tanh_sinh(foldy_integrand, 0.0, 1.0, 1e-15);
  // x = 1/y maps the 1/(2 x^4) tail onto a smooth integrand on (0, 1].
  const double tail = num::integrate_tanh_sinh(
      [](double y) {
        const double y4 = y * y * y * y;
        return y * y / (1.0 + y4 + std::sqrt(1.0 + 2.0 * y4));
      },
      0.0, 1.0, 1e-15);
  c.x_integral_quadrature = head + tail;
  return c;
}

FoldyLaw foldy_law(double rho, double mu, std::optional<double> C_TF, std::optional<double> C_D) {
  require(rho > 0 && std::isfinite(rho), "rho must be positive");
  FoldyLaw f;
  f.energy_per_particle = -foldy_constant(mu).I0 * std::pow(rho, 0.25);
  f.infinite_mass_note = "infinite-mass jellium: energy per particle proportional to -rho^(1/3)";
  if (C_TF || C_D) {
    require(C_TF && C_D, "jellium form needs both C_TF and C_D");
    f.jellium = *C_TF * std::pow(rho, 5.0 / 3.0) - *C_D * std::pow(rho, 4.0 / 3.0);
  }
  return f;
}

double local_energy_integrand(double k, double nu, double ell, double mu) {
  // k^2 P^2 / (P + Q + sqrt(Q (2P + Q))) with k^2 P = 4 pi nu and u = Q / P
  const double u = mu * ell * ell * ell * k * k * k * k / (4 * pi * nu);
  return 4 * pi * nu / (1.0 + u + std::sqrt(u * (2.0 + u)));
}

LocalEnergy local_energy_integral(double nu, double ell, double mu) {
  require(nu > 0 && ell > 0 && mu > 0, "nu, ell and mu must be positive");
  const double k0 = std::pow(4 * pi * nu / (mu * ell * ell * ell), 0.25);
  auto f = [&](double k) { return local_energy_integrand(k, nu, ell, mu); };
  const double I = num::integrate_tanh_sinh(f, 0.0, k0, 1e-14) + num::integrate_exp_sinh(f, k0, 1e-14);
  LocalEnergy out;
  out.quadrature = -0.5 * std::pow(2 * pi, -3) * 4 * pi * I;
  out.closed_form = -std::sqrt(2.0) * std::pow(pi, -0.75) * nu * std::pow(nu / (mu * ell * ell * ell), 0.25) *
                    foldy_constant(1.0).x_integral_closed;
  return out;
}

namespace {

DysonSolution solve_dyson(double mu, std::size_t points) {
  const double I0 = foldy_constant(mu).I0;
  LocalTerm term;
  term.F = [I0](double r) { return r <= 0 ? 0.0 : -I0 * std::pow(r, 1.25); };
  term.dF = [I0](double r) { return r <= 0 ? 0.0 : -1.25 * I0 * std::pow(r, 0.25); };
  term.d2F = [I0](double r) { return r <= 0 ? 0.0 : -0.3125 * I0 * std::pow(r, -0.75); };
  // kinetic ~ mu / L^2 balances I0 L^{-3/4}
  const double scale = std::pow(mu / I0, 0.8);
  double R = 20 * scale;
  for (int attempt = 0; attempt < 12; ++attempt, R *= 1.5) {
    const RadialGrid grid = make_radial_grid(3, points, R);
    RadialFunctional f;
    f.grid = &grid;
    f.kinetic = mu;
    f.V.assign(grid.size(), 0.0);
    f.term = term;
    std::vector<double> phi0(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) phi0[i] = std::exp(-0.5 * std::pow(grid.r[i] / scale, 2));
    FlowOptions opt;
    opt.residual_tol = 1e-10;
    auto res = minimize_normalized(f, 1.0, std::move(phi0), opt);
    double outer = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid.r[i] > 0.9 * R) outer += grid.w[i] * res.phi[i] * res.phi[i];
    if (outer >= 1e-12) continue;
    DysonSolution s;
    s.r = grid.r;
    s.Phi = res.phi;
    s.kinetic = f.kinetic_energy(res.phi);
    s.potential = -f.interaction_energy(res.phi);
    s.E_star = s.kinetic - s.potential;
    s.virial_residual = std::abs(2 * s.kinetic - 0.75 * s.potential) / s.potential;
    s.r_max = R;
    s.boundary_mass = outer;
    s.energy_history = std::move(res.history);
    s.iterations = res.iterations;
    return s;
  }
  throw NumericError("Dyson functional: domain expansion did not reach the boundary-mass target");
}

}  // namespace

const DysonSolution& dyson_functional_minimize(double mu, std::size_t points) {
  require(mu > 0 && std::isfinite(mu), "mu must be positive");
  require(points >= 64, "Dyson grid needs at least 64 points");
  static std::mutex m;
  static std::map<std::pair<double, std::size_t>, std::unique_ptr<const DysonSolution>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[{mu, points}];
  if (!slot) slot = std::make_unique<const DysonSolution>(solve_dyson(mu, points));
  return *slot;
}

TwoComponent two_component_energy(double N, double mu) {
  require(N >= 1 && std::isfinite(N), "N must be at least 1");
  TwoComponent t;
  t.energy = std::pow(N, 1.4) * dyson_functional_minimize(mu).E_star;
  t.L = std::pow(N, -0.2);
  t.ell_cor = std::pow(N, -0.4);
  return t;
}

DysonHeuristic dyson_heuristic(double N) {
  require(N > 0 && std::isfinite(N), "N must be positive");
  auto f = [N](double lnL) {
    const double L = std::exp(lnL);
    return N / (L * L) - N * std::pow(N / (L * L * L), 0.25);
  };
  const double c = std::log(std::pow(N, -0.2));
  const auto best = boost::math::tools::brent_find_minima(f, c - 10.0, c + 10.0, 50);
  return {std::exp(best.first), best.second};
}

}  // namespace bosegas
