#include "bosegas/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"

namespace bosegas {

using num::pi;

namespace {

constexpr double j01 = 2.404825557695772768621631879326;

bool is_box(double s) { return std::isinf(s); }

}  // namespace

void ElongatedTrap::validate() const {
  require(N >= 1 && std::isfinite(N), "N must be at least 1");
  require(L > 0 && std::isfinite(L), "L must be positive");
  require(r > 0 && std::isfinite(r), "r must be positive");
  require(a >= 0 && std::isfinite(a), "a must be nonnegative");
  require(s > 0, "trap exponent s must be positive");
}

std::vector<std::string> ElongatedTrap::warnings() const {
  std::vector<std::string> w;
  if (r >= L) w.emplace_back("transverse length r is not small compared with L");
  if (a >= r) w.emplace_back("scattering length a is not small compared with r");
  return w;
}

TransverseMode transverse_mode(TransverseKind kind, double r, double a) {
  require(r > 0 && std::isfinite(r), "r must be positive");
  require(a >= 0 && std::isfinite(a), "a must be nonnegative");
  TransverseMode m;
  if (kind == TransverseKind::harmonic) {
    m.e_perp_unit = 2.0;
    m.int_b4_unit = 1.0 / (2 * pi);
    m.b = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(pi); };
  } else {
    const double J1 = std::cyl_bessel_j(1.0, j01);
    const double norm = std::sqrt(pi) * std::abs(J1);
    m.e_perp_unit = j01 * j01;
    m.int_b4_unit = 2 * pi / std::pow(norm, 4) *
                    num::integrate_tanh_sinh(
                        [](double x) { return std::pow(std::cyl_bessel_j(0.0, j01 * x), 4) * x; }, 0.0, 1.0,
                        1e-15);
    m.b = [norm](double x) { return x >= 1 ? 0.0 : std::cyl_bessel_j(0.0, j01 * x) / norm; };
  }
  m.e_perp = m.e_perp_unit / (r * r);
  m.g = 8 * pi * a / (r * r) * m.int_b4_unit;
  return m;
}

TransverseMode transverse_mode(const ElongatedTrap& trap) {
  trap.validate();
  return transverse_mode(trap.transverse, trap.r, trap.a);
}

const char* functional_name(Functional1D k) {
  switch (k) {
    case Functional1D::full:
      return "full";
    case Functional1D::gp1d:
      return "gp1d";
    case Functional1D::tf1d:
      return "tf1d";
    case Functional1D::ll_no_grad:
      return "ll_no_grad";
    case Functional1D::gt:
      return "gt";
  }
  return "?";
}

double longitudinal_potential(double z, double L, double s) {
  const double x = std::abs(z) / L;
  if (is_box(s)) return x <= 0.5 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::pow(x, s) / (L * L);
}

LocalTerm local_term_1d(Functional1D kind, double g, const LLCurve* curve) {
  require(g >= 0 && std::isfinite(g), "g must be nonnegative");
  switch (kind) {
    case Functional1D::gp1d:
    case Functional1D::tf1d:
      return g > 0 ? quadratic_term(0.5 * g) : zero_term();
    case Functional1D::gt: {
      const double c = pi * pi / 3;
      return {[c](double r) { return c * r * r * r; }, [c](double r) { return 3 * c * r * r; },
              [c](double r) { return 6 * c * r; }};
    }
    case Functional1D::full:
    case Functional1D::ll_no_grad: {
      require(curve != nullptr, "the Lieb-Liniger functionals need e(t)");
      if (g == 0) return zero_term();
      const LLCurve* c = curve;
      LocalTerm t;
      t.F = [c, g](double r) { return r <= 0 ? 0.0 : r * r * r * c->e(g / r); };
      t.dF = [c, g](double r) {
        if (r <= 0) return 0.0;
        const double x = g / r;
        return 3 * r * r * c->e(x) - g * r * c->de(x);
      };
      t.d2F = [c, g](double r) {
        if (r <= 0) return 0.0;
        const double x = g / r;
        return 6 * r * c->e(x) - 4 * g * c->de(x) + g * g * c->d2e(x) / r;
      };
      return t;
    }
  }
  return zero_term();
}

namespace {

void check_inputs(Functional1D kind, double N, double L, double g, double s, const LLCurve* curve) {
  require(N > 0 && std::isfinite(N), "N must be positive");
  require(L > 0 && std::isfinite(L), "L must be positive");
  require(g >= 0 && std::isfinite(g), "g must be nonnegative");
  require(s > 0, "trap exponent s must be positive");
  if (kind == Functional1D::tf1d || kind == Functional1D::ll_no_grad)
    require(g > 0, std::string(functional_name(kind)) + " needs g > 0");
  if (kind == Functional1D::full || kind == Functional1D::ll_no_grad)
    require(curve != nullptr, "the Lieb-Liniger functionals need e(t)");
}

// Chemical-potential estimates of the form L^-2 f(...) so the grid follows
// the scaling identities exactly.
double mu_ideal(double L, double s) { return (is_box(s) ? pi * pi : 1.0) / (L * L); }

double mu_tf_gp(double N, double L, double g, double s) {
  if (g <= 0) return 0.0;
  if (is_box(s)) return g * N / L;
  return std::pow(N * g * L * (s + 1) / (2 * s), s / (s + 1)) / (L * L);
}

double mu_tf_gt(double N, double L, double s) {
  if (is_box(s)) return std::pow(pi * N / L, 2);
  const double B = std::tgamma(1 + 1 / s) * std::tgamma(1.5) / std::tgamma(1.5 + 1 / s);
  return std::pow(pi * N / (2 * B), 2 * s / (s + 2)) / (L * L);
}

// Pointwise minimisers of the gradient-free functionals: rho(y) with
// F'(rho) = y for y = m - V > 0.
double invert_local(Functional1D kind, double y, double g, const LLCurve* curve) {
  if (y <= 0) return 0.0;
  switch (kind) {
    case Functional1D::tf1d:
      return y / g;
    case Functional1D::gt:
      return std::sqrt(y) / pi;
    default: {
      const double lo = std::min(y / g, std::sqrt(y) / pi);
      auto h = [&](double r) {
        const double t = g / r;
        return 3 * r * r * curve->e(t) - g * r * curve->de(t) - y;
      };
      return num::find_root_expanding(h, 0.5 * lo, 2.0 * lo, 1e-15);
    }
  }
}

Result1D closed_form(Functional1D kind, double N, double L, double g, double s, const LLCurve* curve,
                     std::size_t points) {
  const LocalTerm term = local_term_1d(kind, g, curve);
  const bool box = is_box(s);
  auto V = [&](double z) { return box ? 0.0 : longitudinal_potential(z, L, s); };
  auto edge = [&](double m) { return box ? 0.5 * L : L * std::pow(L * L * m, 1 / s); };
  auto rho = [&](double z, double m) { return invert_local(kind, m - V(z), g, curve); };
  auto mass = [&](double m) {
    return 2 * num::integrate_tanh_sinh([&](double z) { return rho(z, m); }, 0.0, edge(m), 1e-14);
  };
  double guess = kind == Functional1D::tf1d ? mu_tf_gp(N, L, g, s) : mu_tf_gt(N, L, s);
  if (kind == Functional1D::ll_no_grad) guess = std::min(guess, mu_tf_gp(N, L, g, s));
  const double m = num::find_root_expanding([&](double x) { return mass(x) - N; }, 0.5 * guess,
                                            guess, 1e-15);
  const double Z = edge(m);
  Result1D out;
  out.mu = m;
  out.E = 2 * num::integrate_tanh_sinh(
                  [&](double z) {
                    const double r = rho(z, m);
                    return V(z) * r + term.F(r);
                  },
                  0.0, Z, 1e-14);
  out.rho_bar = 2 *
                num::integrate_tanh_sinh(
                    [&](double z) {
                      const double r = rho(z, m);
                      return r * r;
                    },
                    0.0, Z, 1e-14) /
                N;
  auto& pr = out.profile;
  pr.r = num::linspace(0.0, box ? Z : 1.25 * Z, std::max<std::size_t>(points, 2));
  for (double z : pr.r) {
    const double r = box && z > Z ? 0.0 : rho(z, m);
    pr.rho.push_back(r);
    pr.phi.push_back(std::sqrt(r));
  }
  pr.mass = N;
  return out;
}

Result1D flow(Functional1D kind, double N, double L, double g, double s, const LLCurve* curve,
              std::size_t points) {
  const bool box = is_box(s);
  double m = std::max(mu_ideal(L, s), mu_tf_gp(N, L, g, s));
  if (kind == Functional1D::full) m = std::min(m, std::max(mu_ideal(L, s), mu_tf_gt(N, L, s)));
  const double Z = box ? 0.5 * L : L * std::pow(50 * L * L * m, 1 / s);
  const double h = 0.25 / std::sqrt(m);
  const auto cells = std::max<std::size_t>(points, static_cast<std::size_t>(std::ceil(Z / h)));
  const RadialGrid grid = make_radial_grid(1, cells, Z);
  RadialFunctional f;
  f.grid = &grid;
  f.kinetic = 1.0;
  f.term = local_term_1d(kind, g, curve);
  f.V.resize(grid.size());
  std::vector<double> phi0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = grid.r[i];
    f.V[i] = box ? 0.0 : longitudinal_potential(z, L, s);
    phi0[i] = box ? std::cos(0.5 * pi * z / Z)
                  : std::sqrt(std::max(m - f.V[i], 0.0) + 1e-3 * m * std::exp(-f.V[i] / m));
  }
  auto res = minimize_normalized(f, N, std::move(phi0));
  Result1D out;
  out.E = res.energy;
  out.mu = res.lambda;
  out.residual = res.residual;
  out.energy_history = std::move(res.history);
  auto& pr = out.profile;
  pr.r = grid.r;
  pr.phi = res.phi;
  double i2 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = res.phi[i] * res.phi[i];
    pr.rho.push_back(r);
    i2 += grid.w[i] * r * r;
  }
  pr.mass = f.mass(res.phi);
  out.rho_bar = i2 / N;
  return out;
}

}  // namespace

Result1D minimize_1d(Functional1D kind, double N, double L, double g, double s, const LLCurve* curve,
                     std::size_t grid_points) {
  check_inputs(kind, N, L, g, s, curve);
  switch (kind) {
    case Functional1D::full:
    case Functional1D::gp1d:
      return flow(kind, N, L, g, s, curve, grid_points);
    default:
      return closed_form(kind, N, L, g, s, curve, grid_points);
  }
}

RegimeReport classify_ratio(double ratio, double N, const RegimeThresholds& th) {
  require(ratio >= 0 && std::isfinite(ratio), "g / rho_bar must be finite and nonnegative");
  require(N >= 1, "N must be at least 1");
  require(th.much_less > 0 && th.much_less < 1 && th.much_more > 1, "thresholds must straddle 1");
  RegimeReport r;
  r.ratio = ratio;
  r.ratio_scaled = ratio * N * N;
  const double x = r.ratio_scaled;
  std::vector<int> hits;
  if (x < th.much_less) hits.push_back(1);
  if (x >= th.much_less && x <= th.much_more && ratio < th.much_less) hits.push_back(2);
  if (x > th.much_more && ratio < th.much_less) hits.push_back(3);
  if (ratio >= th.much_less && ratio <= th.much_more) hits.push_back(4);
  if (ratio > th.much_more) hits.push_back(5);
  if (x >= th.much_less && x <= th.much_more && ratio >= th.much_less && ratio <= th.much_more) {
    // Few particles: g/rho_bar ~ N^-2 and g/rho_bar ~ 1 hold together.
    hits = {2, 4};
  }
  if (hits.empty()) throw NumericError("regime classification left a gap");
  r.region = hits.front();
  if (hits.size() > 1) {
    r.ambiguous = true;
    r.alternative = hits[1];
  }
  return r;
}

namespace {

Functional1D region_functional(int region) {
  switch (region) {
    case 1:
    case 2:
      return Functional1D::gp1d;
    case 3:
      return Functional1D::tf1d;
    case 4:
      return Functional1D::ll_no_grad;
    default:
      return Functional1D::gt;
  }
}

const char* region_scaling(int region) {
  switch (region) {
    case 1:
    case 2:
      return "rho_bar ~ N / L";
    case 3:
      return "rho_bar ~ (N / L) (N g L)^(-1/(s+1))";
    default:
      return "rho_bar ~ (N / L) N^(-2/(s+2))";
  }
}

}  // namespace

RegimeReport regime_classify(const ElongatedTrap& trap, const RegimeThresholds& th,
                             const LLCurve* curve, double validity_threshold) {
  trap.validate();
  require(trap.a > 0, "regime classification needs a > 0");
  const LLCurve& c = curve ? *curve : LLCurve::standard();
  const double g = transverse_mode(trap).g;
  double rho_bar = minimize_1d(Functional1D::ll_no_grad, trap.N, trap.L, g, trap.s, &c).rho_bar;
  RegimeReport rep = classify_ratio(g / rho_bar, trap.N, th);
  const Functional1D k = region_functional(rep.region);
  if (k != Functional1D::ll_no_grad) {
    const double gk = rep.region == 1 ? 0.0 : g;
    rho_bar = minimize_1d(k, trap.N, trap.L, gk, trap.s, &c).rho_bar;
    rep = classify_ratio(g / rho_bar, trap.N, th);
  }
  rep.passes = 2;
  rep.g = g;
  rep.rho_bar = rho_bar;
  rep.functional = rep.region == 1 ? "gp1d (g = 0)" : functional_name(region_functional(rep.region));
  rep.scaling = region_scaling(rep.region);
  rep.validity = trap.r * trap.r * rho_bar * std::min(rho_bar, g);
  rep.valid = rep.validity < validity_threshold;
  rep.warnings = trap.warnings();
  if (!rep.valid) rep.warnings.emplace_back("r^2 rho_bar min(rho_bar, g) is not small: 1D reduction not justified");
  return rep;
}

BoxBounds1D box_bounds_1d(double n, double ell, double r, double a, double E1D_N, double E1D_D, double C) {
  require(n >= 1, "n must be at least 1");
  require(ell > 0 && r > 0 && a > 0, "ell, r and a must be positive");
  require(a < r, "box bounds need a < r");
  require(C > 0, "C must be positive");
  require(E1D_N >= 0 && E1D_D >= E1D_N, "energies must satisfy 0 <= E_N <= E_D");
  BoxBounds1D b;
  const double q = std::pow(a / r, 0.125);
  b.lower_factor = 1 - C * n * q * (1 + n * r / ell * q);
  b.bracket = std::pow(n * a / r, 2) * (1 + a * ell / (r * r));
  require(b.bracket < 1, "upper bound needs (n a / r)^2 (1 + a ell / r^2) < 1");
  b.upper_factor = 1 + C * std::cbrt(b.bracket);
  b.lower = E1D_N * b.lower_factor;
  b.upper = E1D_D * b.upper_factor;
  return b;
}

}  // namespace bosegas
