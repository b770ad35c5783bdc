#include "bosegas/radial_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"

namespace bosegas {

double sphere_measure(int dimension) {
  switch (dimension) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * num::pi;
    case 3:
      return 4.0 * num::pi;
    default:
      throw PreconditionError("dimension must be 1, 2 or 3");
  }
}

RadialGrid make_radial_grid(int dimension, std::size_t cells, double r_max) {
  require(cells >= 4, "radial grid needs at least 4 cells");
  require(r_max > 0 && std::isfinite(r_max), "radial grid extent must be positive");
  const double S = sphere_measure(dimension);
  RadialGrid g;
  g.dimension = dimension;
  g.r_max = r_max;
  g.h = r_max / static_cast<double>(cells);
  g.r.resize(cells);
  g.w.resize(cells);
  g.face.resize(cells);
  const double d = dimension;
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = static_cast<double>(i) * g.h, hi = lo + g.h;
    g.r[i] = lo + 0.5 * g.h;
    g.w[i] = S * (std::pow(hi, d) - std::pow(lo, d)) / d;
    g.face[i] = S * std::pow(hi, d - 1) / g.h;
  }
  // Dirichlet wall at half a cell from the last centre.
  g.face.back() *= 2.0;
  return g;
}

LocalTerm quadratic_term(double c) {
  return {[c](double rho) { return c * rho * rho; }, [c](double rho) { return 2 * c * rho; },
          [c](double) { return 2 * c; }};
}

LocalTerm zero_term() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

namespace {

void apply_K(const RadialGrid& g, const std::vector<double>& phi, std::vector<double>& out) {
  const std::size_t n = g.size();
  out.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double flux = g.face[j] * (phi[j] - phi[j + 1]);
    out[j] += flux;
    out[j + 1] -= flux;
  }
  out[n - 1] += g.face[n - 1] * phi[n - 1];
}

double sup_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void normalize(const RadialFunctional& f, std::vector<double>& phi, double N) {
  const double m = f.mass(phi);
  if (!(m > 0) || !std::isfinite(m)) throw NumericError("minimiser lost its normalisation");
  const double s = std::sqrt(N / m);
  for (auto& x : phi) x *= s;
}

// 2 rho F''(rho), finite where F'' is singular at zero density.
double curvature_term(const LocalTerm& t, double rho) {
  if (rho <= 0) return 0.0;
  return 2 * rho * t.d2F(rho);
}

}  // namespace

double RadialFunctional::kinetic_energy(const std::vector<double>& phi) const {
  const auto& g = *grid;
  const std::size_t n = g.size();
  double s = 0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double d = phi[j + 1] - phi[j];
    s += g.face[j] * d * d;
  }
  s += g.face[n - 1] * phi[n - 1] * phi[n - 1];
  return kinetic * s;
}

double RadialFunctional::potential_energy(const std::vector<double>& phi) const {
  double s = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += grid->w[i] * V[i] * phi[i] * phi[i];
  return s;
}

double RadialFunctional::interaction_energy(const std::vector<double>& phi) const {
  double s = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += grid->w[i] * term.F(phi[i] * phi[i]);
  return s;
}

double RadialFunctional::energy(const std::vector<double>& phi) const {
  return kinetic_energy(phi) + potential_energy(phi) + interaction_energy(phi);
}

double RadialFunctional::mass(const std::vector<double>& phi) const {
  double s = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += grid->w[i] * phi[i] * phi[i];
  return s;
}

std::vector<double> RadialFunctional::apply_H(const std::vector<double>& phi) const {
  std::vector<double> out;
  apply_K(*grid, phi, out);
  for (std::size_t i = 0; i < phi.size(); ++i)
    out[i] = kinetic * out[i] / grid->w[i] + (V[i] + term.dF(phi[i] * phi[i])) * phi[i];
  return out;
}

double RadialFunctional::multiplier(const std::vector<double>& phi) const {
  const auto Hphi = apply_H(phi);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    num += grid->w[i] * phi[i] * Hphi[i];
    den += grid->w[i] * phi[i] * phi[i];
  }
  return num / den;
}

double RadialFunctional::residual(const std::vector<double>& phi, double lambda) const {
  const auto Hphi = apply_H(phi);
  double m = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) m = std::max(m, std::abs(Hphi[i] - lambda * phi[i]));
  const double scale = std::max(std::abs(lambda), std::numeric_limits<double>::min()) * sup_abs(phi);
  return m / scale;
}

namespace {

// One Newton step on (phi, lambda); returns false when the linear solve fails.
bool newton_step(const RadialFunctional& f, double N, std::vector<double>& phi, double& lambda) {
  const auto& g = *f.grid;
  const int n = static_cast<int>(g.size());
  std::vector<double> Kphi;
  apply_K(g, phi, Kphi);
  Eigen::VectorXd rhs(n + 1);
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double rho = phi[ui] * phi[ui];
    rhs(i) = -(f.kinetic * Kphi[ui] + g.w[ui] * (f.V[ui] + f.term.dF(rho) - lambda) * phi[ui]);
  }
  rhs(n) = -(f.mass(phi) - N);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5 * n + 2));
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double rho = phi[ui] * phi[ui];
    double diag = g.w[ui] * (f.V[ui] + f.term.dF(rho) + curvature_term(f.term, rho) - lambda);
    diag += f.kinetic * (g.face[ui] + (i > 0 ? g.face[ui - 1] : 0.0));
    trip.emplace_back(i, i, diag);
    if (i + 1 < n) {
      trip.emplace_back(i, i + 1, -f.kinetic * g.face[ui]);
      trip.emplace_back(i + 1, i, -f.kinetic * g.face[ui]);
    }
    trip.emplace_back(i, n, -g.w[ui] * phi[ui]);
    trip.emplace_back(n, i, 2 * g.w[ui] * phi[ui]);
  }
  Eigen::SparseMatrix<double> J(n + 1, n + 1);
  J.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success) return false;
  const Eigen::VectorXd dx = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !dx.allFinite()) return false;
  for (int i = 0; i < n; ++i) phi[static_cast<std::size_t>(i)] += dx(i);
  lambda += dx(n);
  return true;
}

}  // namespace

FlowResult minimize_normalized(const RadialFunctional& f, double N, std::vector<double> phi,
                               const FlowOptions& opt) {
  require(f.grid != nullptr, "functional has no grid");
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  require(f.V.size() == n && phi.size() == n, "potential and initial state must match the grid");
  require(N > 0 && std::isfinite(N), "particle number must be positive");
  for (auto& x : phi) x = std::abs(x);
  normalize(f, phi, N);

  FlowResult res;
  double E = f.energy(phi);
  if (!std::isfinite(E)) throw NumericError("initial energy is not finite");
  if (opt.record_history) res.history.push_back(E);
  double lambda = f.multiplier(phi);
  const double scale = std::max(std::abs(lambda), 1e-12);
  double tau = opt.tau0 > 0 ? opt.tau0 : 0.1 / scale;
  const double tau_max = 1e8 / scale;
  const double tau_min = 1e-14 / scale;
  const double switch_tol = opt.newton_polish ? std::max(opt.residual_tol, 1e-5) : opt.residual_tol;

  std::vector<double> sub(n), diag(n), sup(n), rhs(n), trial;
  double residual = f.residual(phi, lambda);
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    // Semi-implicit step with the local term frozen; the shift keeps the
    // operator positive so the linear system stays well posed.
    double sigma = 0;
    std::vector<double> loc(n);
    for (std::size_t i = 0; i < n; ++i) {
      loc[i] = f.V[i] + f.term.dF(phi[i] * phi[i]);
      sigma = std::min(sigma, loc[i]);
    }
    bool accepted = false;
    double E_new = E;
    while (tau >= tau_min) {
      for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? g.face[i - 1] : 0.0;
        diag[i] = g.w[i] + tau * (f.kinetic * (left + g.face[i]) + g.w[i] * (loc[i] - sigma));
        sub[i] = i > 0 ? -tau * f.kinetic * g.face[i - 1] : 0.0;
        sup[i] = i + 1 < n ? -tau * f.kinetic * g.face[i] : 0.0;
        rhs[i] = g.w[i] * phi[i];
      }
      trial = num::solve_tridiagonal(sub, diag, sup, rhs);
      normalize(f, trial, N);
      E_new = f.energy(trial);
      if (std::isfinite(E_new) && E_new <= E + 1e-15 * std::abs(E)) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;
    const double dE = E - E_new;
    phi.swap(trial);
    E = E_new;
    if (opt.record_history) res.history.push_back(E);
    tau = std::min(2 * tau, tau_max);
    lambda = f.multiplier(phi);
    residual = f.residual(phi, lambda);
    const bool small_step = std::abs(dE) <= opt.energy_tol * std::max(1.0, std::abs(E));
    if (residual < switch_tol && (opt.newton_polish || small_step)) break;
  }
  res.iterations = it;

  if (opt.newton_polish) {
    for (int k = 0; k < 30 && residual >= opt.residual_tol * 1e-2; ++k) {
      std::vector<double> p = phi;
      double l = lambda;
      if (!newton_step(f, N, p, l)) break;
      for (auto& x : p) x = std::abs(x);
      normalize(f, p, N);
      const double lp = f.multiplier(p);
      const double rp = f.residual(p, lp);
      if (!(rp < residual)) break;
      phi.swap(p);
      lambda = lp;
      residual = rp;
      const double En = f.energy(phi);
      if (opt.record_history) res.history.push_back(En);
      E = En;
      ++res.iterations;
    }
  }

  res.phi = std::move(phi);
  res.energy = E;
  res.lambda = lambda;
  res.residual = residual;
  res.converged = residual < opt.residual_tol;
  if (!res.converged)
    throw NumericError("normalised gradient flow did not converge (residual " +
                       std::to_string(residual) + ")");
  return res;
}

}  // namespace bosegas
