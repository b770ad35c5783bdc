#include "bosegas/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"

namespace bosegas {

using num::pi;

TrapPotential TrapPotential::harmonic() { return {TrapKind::harmonic, 2.0, 1.0}; }

TrapPotential TrapPotential::power(double s) {
  TrapPotential t{TrapKind::power, s, 1.0};
  t.validate();
  return t;
}

TrapPotential TrapPotential::box(double side) {
  TrapPotential t{TrapKind::box, std::numeric_limits<double>::infinity(), side};
  t.validate();
  return t;
}

double TrapPotential::operator()(double r) const {
  switch (kind) {
    case TrapKind::harmonic:
      return r * r;
    case TrapKind::power:
      return std::pow(std::abs(r), s);
    case TrapKind::box:
      return std::abs(r) <= side / 2 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double TrapPotential::degree() const {
  switch (kind) {
    case TrapKind::harmonic:
      return 2.0;
    case TrapKind::power:
      return s;
    case TrapKind::box:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

void TrapPotential::validate() const {
  if (kind == TrapKind::power) require(s > 0 && std::isfinite(s), "trap exponent s must be positive");
  if (kind == TrapKind::box) require(side > 0 && std::isfinite(side), "box side must be positive");
}

void GPProblem::validate() const {
  require(dimension == 2 || dimension == 3, "GP dimension must be 2 or 3");
  require(N > 0 && std::isfinite(N), "N must be positive");
  require(coupling >= 0 && std::isfinite(coupling), "coupling must be nonnegative");
  require(mu > 0 && std::isfinite(mu), "mu must be positive");
  require(grid_points >= 16, "grid needs at least 16 points");
  trap.validate();
}

namespace {

// Closed-form TF chemical potential for V = r^s, F = c rho^2.
double tf_mu_closed(int d, double s, double Nc, double S) {
  return std::pow(Nc * 2.0 * d * (d + s) / (S * s), s / (s + d));
}

double box_volume(int d, double R) { return sphere_measure(d) * std::pow(R, d) / d; }

}  // namespace

double gp_energy_scale(const GPProblem& p) {
  p.validate();
  const int d = p.dimension;
  const double Nc = p.N * 4 * pi * p.mu * p.coupling;
  if (p.trap.kind == TrapKind::box) {
    const double R = p.trap.side / 2;
    return std::max(p.mu * std::pow(pi / R, 2), 2 * Nc / box_volume(d, R));
  }
  const double s = p.trap.degree();
  const double ideal = d * std::pow(p.mu, s / (s + 2));
  const double tf = Nc > 0 ? tf_mu_closed(d, s, Nc, sphere_measure(d)) : 0.0;
  return std::max(ideal, tf);
}

RadialGrid gp_grid(const GPProblem& p) {
  const double E = gp_energy_scale(p);
  double rmax = 0;
  if (p.trap.kind == TrapKind::box) {
    rmax = p.trap.side / 2;
  } else {
    rmax = std::pow(50.0 * E, 1.0 / p.trap.degree());
  }
  const double h = 0.25 * std::sqrt(p.mu / E);
  const auto cells = std::max<std::size_t>(p.grid_points, static_cast<std::size_t>(std::ceil(rmax / h)));
  return make_radial_grid(p.dimension, cells, rmax);
}

namespace {

GPResult run_gp(const GPProblem& p, RadialGrid grid, std::vector<double> phi0, const FlowOptions& opt) {
  GPResult out;
  out.grid = std::move(grid);
  const auto& g = out.grid;
  const double c = 4 * pi * p.mu * p.coupling;
  RadialFunctional f;
  f.grid = &g;
  f.kinetic = p.mu;
  f.V.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f.V[i] = p.trap.kind == TrapKind::box ? 0.0 : p.trap(g.r[i]);
  f.term = c > 0 ? quadratic_term(c) : zero_term();
  auto res = minimize_normalized(f, p.N, std::move(phi0), opt);
  out.iterations = res.iterations;
  out.energy_history = std::move(res.history);
  auto& pr = out.profile;
  pr.r = g.r;
  pr.phi = res.phi;
  pr.rho.resize(g.size());
  double i4 = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    pr.rho[i] = pr.phi[i] * pr.phi[i];
    i4 += g.w[i] * pr.rho[i] * pr.rho[i];
  }
  pr.mass = f.mass(pr.phi);
  auto& rep = out.report;
  rep.kinetic = f.kinetic_energy(pr.phi);
  rep.trap = f.potential_energy(pr.phi);
  rep.interaction = c * i4;
  rep.E_total = rep.kinetic + rep.trap + rep.interaction;
  rep.mu_chem = res.lambda;
  rep.residual_gp = res.residual;
  rep.int_rho2 = i4;
  return out;
}

}  // namespace

GPResult gp_minimize_from(const GPProblem& p, std::vector<double> phi0, const FlowOptions& opt) {
  p.validate();
  auto grid = gp_grid(p);
  require(phi0.size() == grid.size(), "initial profile does not match the GP grid");
  return run_gp(p, std::move(grid), std::move(phi0), opt);
}

GPResult gp_minimize(const GPProblem& p, const FlowOptions& opt) {
  p.validate();
  auto grid = gp_grid(p);
  const double E = gp_energy_scale(p);
  std::vector<double> phi0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double V = p.trap.kind == TrapKind::box ? 0.0 : p.trap(grid.r[i]);
    const double bulk = std::max(E - V, 0.0);
    phi0[i] = std::sqrt(bulk + 1e-3 * E * std::exp(-V / E));
    if (p.trap.kind == TrapKind::box) phi0[i] = std::cos(0.5 * pi * grid.r[i] / grid.r_max);
  }
  return run_gp(p, std::move(grid), std::move(phi0), opt);
}

Coupling2D coupling_2d(double N, double a, const TrapPotential& trap, double mu,
                       std::size_t grid_points) {
  require(a > 0, "scattering length must be positive");
  GPProblem p;
  p.dimension = 2;
  p.N = N;
  p.coupling = 1.0;
  p.mu = mu;
  p.trap = trap;
  p.grid_points = grid_points;
  const auto gp = gp_minimize(p);
  Coupling2D out;
  out.rho_bar = gp.report.int_rho2 / N;
  const double x = out.rho_bar * a * a;
  require(x < 1, "2D coupling needs rho_bar a^2 < 1");
  out.alpha = 1.0 / std::abs(std::log(x));
  return out;
}

TFResult tf_solve(int dimension, double N, double coupling, const TrapPotential& trap, double mu,
                  std::size_t profile_points) {
  require(dimension == 2 || dimension == 3, "TF dimension must be 2 or 3");
  require(N > 0 && std::isfinite(N), "N must be positive");
  require(coupling > 0 && std::isfinite(coupling), "TF needs a positive coupling");
  require(mu > 0, "mu must be positive");
  require(profile_points >= 2, "profile needs at least 2 points");
  trap.validate();
  const double c = 4 * pi * mu * coupling;
  const double S = sphere_measure(dimension);
  const int d = dimension;
  const bool box = trap.kind == TrapKind::box;
  auto Vr = [&](double r) { return box ? 0.0 : trap(r); };
  auto edge = [&](double m) { return box ? trap.side / 2 : std::pow(m, 1.0 / trap.degree()); };
  auto mass = [&](double m) {
    const double R = edge(m);
    return S / (2 * c) *
           num::integrate_tanh_sinh([&](double r) { return std::max(m - Vr(r), 0.0) * std::pow(r, d - 1); },
                                    0.0, R, 1e-14);
  };
  const double m = num::find_root_expanding([&](double x) { return mass(x) - N; }, 1e-3, 1.0, 1e-15);
  TFResult out;
  out.mu_tf = m;
  const double R = edge(m);
  auto rho = [&](double r) { return std::max(m - Vr(r), 0.0) / (2 * c); };
  auto& rep = out.report;
  rep.trap = S * num::integrate_tanh_sinh([&](double r) { return Vr(r) * rho(r) * std::pow(r, d - 1); }, 0.0, R, 1e-14);
  rep.interaction =
      S * c * num::integrate_tanh_sinh([&](double r) { return rho(r) * rho(r) * std::pow(r, d - 1); }, 0.0, R, 1e-14);
  rep.int_rho2 = rep.interaction / c;
  rep.E_total = rep.trap + rep.interaction;
  rep.mu_chem = m;
  auto& pr = out.profile;
  pr.r = num::linspace(0.0, box ? R : 1.25 * R, profile_points);
  for (double r : pr.r) {
    pr.rho.push_back(rho(r));
    pr.phi.push_back(std::sqrt(rho(r)));
  }
  pr.mass = N;
  return out;
}

ComponentSplit energy_components(const GPProblem& p, const GPResult& gp,
                                 const ScatteringSolution& scattering) {
  require(p.dimension == 3, "energy components are defined for the 3D functional");
  require(scattering.dimension == 3 && scattering.a > 0, "energy components need s from a 3D solution with a > 0");
  require(scattering.s > 0 && scattering.s <= 1 + 1e-9, "s must lie in (0, 1]");
  ComponentSplit out;
  out.s = std::min(scattering.s, 1.0);
  const double inter = 4 * pi * p.mu * p.coupling * gp.report.int_rho2;
  out.kinetic = gp.report.kinetic + out.s * inter;
  out.trap = gp.report.trap;
  out.interaction = (1 - out.s) * inter;
  out.sum = out.kinetic + out.trap + out.interaction;
  out.bookkeeping_residual =
      std::abs(out.sum - gp.report.E_total) / std::max(std::abs(gp.report.E_total), 1e-300);
  return out;
}

std::vector<LimitRow> gp_tf_limit_scan(int dimension, const TrapPotential& trap,
                                       const std::vector<double>& g_list, double mu) {
  require(trap.homogeneous(), "GP to TF scan needs a homogeneous trap");
  const double s = trap.degree();
  std::vector<LimitRow> rows;
  for (double g : g_list) {
    require(g > 0, "couplings must be positive");
    GPProblem p;
    p.dimension = dimension;
    p.N = 1.0;
    p.coupling = g;
    p.mu = mu;
    p.trap = trap;
    LimitRow row;
    row.g = g;
    row.E_gp = gp_minimize(p).report.E_total;
    row.E_tf = tf_solve(dimension, 1.0, g, trap, mu).report.E_total;
    row.ratio = row.E_gp / row.E_tf;
    row.rescaled = row.E_gp / std::pow(g, s / (s + dimension));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bosegas
