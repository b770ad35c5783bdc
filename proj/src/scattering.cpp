#include "bosegas/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bosegas/errors.hpp"
#include "bosegas/io.hpp"
#include "bosegas/numerics.hpp"

namespace bosegas {

using num::pi;

RadialPotential RadialPotential::hard_core(double R0, int dimension) {
  RadialPotential p;
  p.kind = PotentialKind::hard_core;
  p.R0 = R0;
  p.dimension = dimension;
  p.validate();
  return p;
}

RadialPotential RadialPotential::soft_sphere(double R0, double v0, int dimension) {
  RadialPotential p;
  p.kind = PotentialKind::soft_sphere;
  p.R0 = R0;
  p.v0 = v0;
  p.dimension = dimension;
  p.validate();
  return p;
}

RadialPotential RadialPotential::tabulated(std::vector<double> r, std::vector<double> v,
                                           int dimension) {
  RadialPotential p;
  p.kind = PotentialKind::tabulated;
  p.r = std::move(r);
  p.v = std::move(v);
  p.dimension = dimension;
  if (!p.r.empty()) p.R0 = p.r.back();
  p.validate();
  return p;
}

double RadialPotential::inner_value(double x) const {
  switch (kind) {
    case PotentialKind::hard_core:
      return std::numeric_limits<double>::infinity();
    case PotentialKind::soft_sphere:
      return v0;
    case PotentialKind::tabulated: {
      if (x <= r.front()) return v.front();
      if (x >= r.back()) return v.back();
      const auto it = std::upper_bound(r.begin(), r.end(), x);
      const std::size_t j = static_cast<std::size_t>(it - r.begin());
      const double w = (x - r[j - 1]) / (r[j] - r[j - 1]);
      return (1 - w) * v[j - 1] + w * v[j];
    }
  }
  return 0.0;
}

double RadialPotential::operator()(double x) const {
  if (x > R0) return 0.0;
  if (kind == PotentialKind::hard_core && x == R0) return 0.0;
  return inner_value(x);
}

bool RadialPotential::identically_zero() const {
  switch (kind) {
    case PotentialKind::hard_core:
      return false;
    case PotentialKind::soft_sphere:
      return v0 == 0.0;
    case PotentialKind::tabulated:
      return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  }
  return false;
}

void RadialPotential::validate() const {
  require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
  if (kind == PotentialKind::tabulated) {
    require(r.size() >= 2 && r.size() == v.size(), "tabulated potential needs >= 2 (r, v) samples");
    require(r.front() >= 0, "tabulated radii must be nonnegative");
    for (std::size_t i = 1; i < r.size(); ++i)
      require(r[i] > r[i - 1], "tabulated radii must be strictly increasing");
    for (double x : v) {
      require(std::isfinite(x), "potential samples must be finite");
      require(x >= 0, "negative potential sample");
    }
    require(std::abs(R0 - r.back()) <= 1e-12 * std::max(1.0, r.back()),
            "R0 must equal the last sample radius");
  }
  require(R0 > 0 && std::isfinite(R0), "R0 must be positive");
  if (kind == PotentialKind::soft_sphere) {
    require(std::isfinite(v0), "soft-sphere height must be finite");
    require(v0 >= 0, "negative potential sample");
  }
}

namespace {

struct Mesh {
  std::vector<double> r;
  std::size_t core = 0;
};

Mesh make_mesh(double R0, const GridSpec& spec) {
  require(spec.points >= 8, "grid needs at least 8 points");
  require(std::isfinite(spec.extent_factor) && spec.extent_factor >= 4.0,
          "grid must extend at least 4 R0");
  const double rmax = spec.extent_factor * R0;
  std::size_t n_in = static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.points) * R0 / rmax));
  n_in = std::max<std::size_t>(2, n_in + (n_in % 2));
  std::size_t n_out = spec.points > n_in + 2 ? spec.points - n_in : 2;
  n_out += n_out % 2;
  Mesh m;
  m.r.resize(n_in + n_out + 1);
  for (std::size_t i = 0; i <= n_in; ++i)
    m.r[i] = R0 * static_cast<double>(i) / static_cast<double>(n_in);
  for (std::size_t i = 1; i <= n_out; ++i)
    m.r[n_in + i] = R0 + (rmax - R0) * static_cast<double>(i) / static_cast<double>(n_out);
  m.r[n_in] = R0;
  m.r.back() = rmax;
  m.core = n_in;
  return m;
}

struct Integrated {
  std::vector<double> u, du;
  double a = 0;
  double scale = 1;  // normalisation divisor applied to u
};

// 3D: u'' = q u with q = v / (2 mu).
Integrated integrate3d(const RadialPotential& v, double mu, const Mesh& m) {
  const std::size_t n = m.r.size();
  Integrated out;
  out.u.assign(n, 0.0);
  out.du.assign(n, 0.0);
  std::size_t start = 0;
  double u = 0, du = 1;
  if (v.kind == PotentialKind::hard_core) start = m.core;
  out.u[start] = u;
  out.du[start] = du;
  for (std::size_t i = start; i + 1 < n; ++i) {
    const double r0 = m.r[i], h = m.r[i + 1] - r0;
    const bool inside = i < m.core;
    auto q = [&](double x) { return inside ? v.inner_value(x) / (2 * mu) : 0.0; };
    const double q0 = q(r0), q1 = q(r0 + h / 2), q2 = q(r0 + h);
    const double k1u = du, k1p = q0 * u;
    const double k2u = du + h / 2 * k1p, k2p = q1 * (u + h / 2 * k1u);
    const double k3u = du + h / 2 * k2p, k3p = q1 * (u + h / 2 * k2u);
    const double k4u = du + h * k3p, k4p = q2 * (u + h * k3u);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    out.u[i + 1] = u;
    out.du[i + 1] = du;
  }
  const double c = out.du.back();
  if (!(c > 0) || !std::isfinite(c)) throw NumericError("scattering integration diverged");
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] /= c;
    out.du[i] /= c;
  }
  out.a = m.r.back() - out.u.back() / out.du.back();
  out.scale = c;
  return out;
}

// 2D: psi'' = -psi'/r + q psi, regular at the origin.
Integrated integrate2d(const RadialPotential& v, double mu, const Mesh& m) {
  const std::size_t n = m.r.size();
  Integrated out;
  out.u.assign(n, 0.0);
  out.du.assign(n, 0.0);
  std::size_t start = 0;
  double p = 1, dp = 0;
  if (v.kind == PotentialKind::hard_core) {
    start = m.core;
    p = 0;
    dp = 1;
  }
  out.u[start] = p;
  out.du[start] = dp;
  for (std::size_t i = start; i + 1 < n; ++i) {
    const double r0 = m.r[i], h = m.r[i + 1] - r0;
    const bool inside = i < m.core;
    auto rhs = [&](double x, double f, double df) {
      const double q = inside ? v.inner_value(x) / (2 * mu) : 0.0;
      if (x == 0.0) return q * f / 2;
      return -df / x + q * f;
    };
    const double k1f = dp, k1d = rhs(r0, p, dp);
    const double k2f = dp + h / 2 * k1d, k2d = rhs(r0 + h / 2, p + h / 2 * k1f, dp + h / 2 * k1d);
    const double k3f = dp + h / 2 * k2d, k3d = rhs(r0 + h / 2, p + h / 2 * k2f, dp + h / 2 * k2d);
    const double k4f = dp + h * k3d, k4d = rhs(r0 + h, p + h * k3f, dp + h * k3d);
    p += h / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
    dp += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
    out.u[i + 1] = p;
    out.du[i + 1] = dp;
  }
  // Least-squares fit psi = A ln r + B on the outer half of the exterior.
  const double rmid = 0.5 * (m.r[m.core] + m.r.back());
  std::vector<double> lx, ly;
  for (std::size_t i = m.core; i < n; ++i)
    if (m.r[i] >= rmid) {
      lx.push_back(std::log(m.r[i]));
      ly.push_back(out.u[i]);
    }
  const auto fit = num::fit_line(lx, ly);
  const double A = fit.slope, B = fit.intercept;
  if (!(std::abs(A) > 1e-12 * std::abs(B)) || !std::isfinite(A))
    throw NumericError("no logarithmic asymptote");
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] /= A;
    out.du[i] /= A;
  }
  out.a = std::exp(-B / A);
  if (!std::isfinite(out.a)) throw NumericError("no logarithmic asymptote");
  out.scale = A;
  return out;
}

double u_over_r(const std::vector<double>& r, const std::vector<double>& u,
                const std::vector<double>& du, std::size_t i) {
  return r[i] == 0.0 ? du[i] : u[i] / r[i];
}

// 4 pi * int_{r_0}^{r_j} [2 mu (u' - u/r)^2 + v u^2] dr with the potential
// discontinuity at the core node handled by splitting the Simpson panels.
double form_to_node(const std::vector<double>& r, const std::vector<double>& u,
                    const std::vector<double>& du, const RadialPotential& v, double mu,
                    std::size_t core, std::size_t j) {
  std::vector<double> f(r.size(), 0.0);
  double total = 0;
  const std::size_t jin = std::min(j, core);
  if (v.kind == PotentialKind::hard_core) {
    for (std::size_t i = 0; i < jin; ++i)
      if (u[i] != 0.0) return std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t i = 0; i <= jin; ++i) {
      const double g = du[i] - u_over_r(r, u, du, i);
      f[i] = 2 * mu * g * g + v.inner_value(r[i]) * u[i] * u[i];
    }
    total += num::simpson(r, f, 0, jin);
  }
  if (j > core) {
    for (std::size_t i = core; i <= j; ++i) {
      const double g = du[i] - u_over_r(r, u, du, i);
      f[i] = 2 * mu * g * g;
    }
    total += num::simpson(r, f, core, j);
  }
  return 4 * pi * total;
}

}  // namespace

ScatteringSolution solve_zero_energy(const RadialPotential& v, double mu, const GridSpec& grid) {
  v.validate();
  require(mu > 0 && std::isfinite(mu), "mu must be positive");
  if (v.dimension == 2 && v.identically_zero()) throw NumericError("no logarithmic asymptote");
  const Mesh m = make_mesh(v.R0, grid);
  GridSpec coarse = grid;
  coarse.points = std::max<std::size_t>(8, grid.points / 2);
  const Mesh mc = make_mesh(v.R0, coarse);

  ScatteringSolution sol;
  sol.dimension = v.dimension;
  sol.mu = mu;
  sol.R0 = v.R0;
  sol.core_index = m.core;
  sol.grid = m.r;
  Integrated fine = v.dimension == 3 ? integrate3d(v, mu, m) : integrate2d(v, mu, m);
  Integrated crude = v.dimension == 3 ? integrate3d(v, mu, mc) : integrate2d(v, mu, mc);
  sol.u = std::move(fine.u);
  sol.du = std::move(fine.du);
  sol.a = fine.a;
  sol.richardson_error = std::abs(fine.a - crude.a) / 15.0;
  if (v.dimension == 3 && sol.a > 0) sol.s = s_parameter(sol);
  return sol;
}

double energy_identity_lhs(const ScatteringSolution& sol, const RadialPotential& v, double R) {
  require(sol.dimension == 3, "energy identity is a 3D statement");
  require(R >= sol.R0, "R must be at least R0");
  const auto& r = sol.grid;
  std::size_t j = static_cast<std::size_t>(std::upper_bound(r.begin(), r.end(), R) - r.begin());
  j = j == 0 ? 0 : j - 1;
  j = std::max(j, sol.core_index);
  double lhs = form_to_node(r, sol.u, sol.du, v, sol.mu, sol.core_index, j);
  // Beyond R0 the solution is exactly r - a, so the remainder is analytic.
  if (R > r[j]) lhs += 4 * pi * 2 * sol.mu * sol.a * sol.a * (1.0 / r[j] - 1.0 / R);
  return lhs;
}

double energy_identity_residual(const ScatteringSolution& sol, const RadialPotential& v,
                                double R) {
  require(sol.a > 0, "energy identity needs a > 0");
  const double lhs = energy_identity_lhs(sol, v, R);
  const double rhs = 8 * pi * sol.mu * sol.a * (1 - sol.a / R);
  return std::abs(lhs - rhs) / (8 * pi * sol.mu * sol.a);
}

double s_parameter(const ScatteringSolution& sol) {
  require(sol.dimension == 3, "s is defined for 3D solutions");
  require(sol.a > 0, "s needs a > 0");
  const auto& r = sol.grid;
  std::vector<double> f(r.size(), 0.0);
  const std::size_t start = sol.u[0] == 0.0 && sol.du[0] == 0.0 ? sol.core_index : 0;
  for (std::size_t i = start; i < r.size(); ++i) {
    const double g = sol.du[i] - u_over_r(r, sol.u, sol.du, i);
    f[i] = g * g;
  }
  double integral = 0;
  if (start < sol.core_index) integral += num::simpson(r, f, start, sol.core_index);
  integral += num::simpson(r, f, sol.core_index, r.size() - 1);
  integral += sol.a * sol.a / r.back();
  return integral / sol.a;
}

double radial_quadratic_form(const std::vector<double>& grid, const std::vector<double>& u,
                             const std::vector<double>& du, const RadialPotential& v,
                             double mu, double R) {
  require(grid.size() == u.size() && u.size() == du.size(), "sample arrays differ in length");
  const auto itc = std::lower_bound(grid.begin(), grid.end(), v.R0 * (1 - 1e-14));
  require(itc != grid.end(), "grid does not reach R0");
  const std::size_t core = static_cast<std::size_t>(itc - grid.begin());
  std::size_t j = static_cast<std::size_t>(
      std::upper_bound(grid.begin(), grid.end(), R * (1 + 1e-14)) - grid.begin());
  require(j > 0, "R below the grid");
  return form_to_node(grid, u, du, v, mu, core, j - 1);
}

RadialPotential dilate_potential(const RadialPotential& v, double lambda) {
  require(lambda > 0 && std::isfinite(lambda), "scale factor must be positive");
  RadialPotential out = v;
  out.R0 = v.R0 * lambda;
  out.v0 = v.v0 / (lambda * lambda);
  for (auto& x : out.r) x *= lambda;
  for (auto& x : out.v) x /= lambda * lambda;
  if (!out.r.empty()) out.R0 = out.r.back();
  out.validate();
  return out;
}

RadialPotential scale_potential(const RadialPotential& v, double a_target, double mu,
                                const GridSpec& grid, double tol) {
  require(a_target > 0, "target scattering length must be positive");
  const double a = solve_zero_energy(v, mu, grid).a;
  if (std::abs(a - 1.0) > tol)
    throw PreconditionError("base potential scattering length is " + io::fmt(a) + ", not 1");
  return dilate_potential(v, a_target);
}

RadialPotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open potential file: " + path);
  int dim = 3;
  double R0 = -1;
  std::vector<double> r, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      const std::string val = line.substr(eq + 1);
      try {
        if (key == "dimension") dim = std::stoi(val);
        if (key == "R0") R0 = std::stod(val);
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed header value");
      }
      continue;
    }
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream is(line);
    double a = 0, b = 0;
    if (!(is >> a >> b))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two columns r v");
    r.push_back(a);
    v.push_back(b);
  }
  auto p = RadialPotential::tabulated(std::move(r), std::move(v), dim);
  if (R0 > 0)
    require(std::abs(R0 - p.R0) <= 1e-12 * std::max(1.0, R0),
            "header R0 must equal the last sample radius");
  return p;
}

void save_potential(const RadialPotential& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# dimension=" << v.dimension << "\n# R0=" << io::fmt(v.R0) << "\n";
  for (std::size_t i = 0; i < v.r.size(); ++i)
    out << io::fmt(v.r[i]) << ' ' << io::fmt(v.v[i]) << '\n';
}

void save_solution_csv(const ScatteringSolution& sol, const std::string& path) {
  io::CsvTable t;
  t.header = {"r", "u"};
  for (std::size_t i = 0; i < sol.grid.size(); ++i) t.rows.push_back({sol.grid[i], sol.u[i]});
  io::write_csv(path, t);
}

}  // namespace bosegas
