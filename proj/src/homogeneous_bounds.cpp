#include "bosegas/homogeneous_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"

namespace bosegas {

using num::pi;

double GasState3D::Y() const { return 4.0 * pi * rho * a * a * a / 3.0; }

void GasState3D::validate() const {
  require(rho > 0 && std::isfinite(rho), "rho must be positive");
  require(a > 0 && std::isfinite(a), "a must be positive");
  require(mu > 0 && std::isfinite(mu), "mu must be positive");
}

double GasState2D::logY() const { return std::abs(std::log(rho * a * a)); }

void GasState2D::validate() const {
  require(rho > 0 && std::isfinite(rho), "rho must be positive");
  require(a > 0 && std::isfinite(a), "a must be positive");
  require(mu > 0 && std::isfinite(mu), "mu must be positive");
  require(rho * a * a < 1, "2D state must be dilute: rho a^2 < 1");
}

LengthScales length_scales(double rho, double a, int dimension) {
  require(rho > 0 && a > 0, "rho and a must be positive");
  require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
  LengthScales s;
  s.a = a;
  s.mean_spacing = std::pow(rho, -1.0 / dimension);
  s.healing = 1.0 / std::sqrt(rho * a);
  s.dilute = s.a < s.mean_spacing && s.mean_spacing < s.healing;
  return s;
}

double upper_ratio_thermodynamic(double Y) {
  require(Y >= 0 && Y < 1, "thermodynamic upper bound needs 0 <= Y < 1");
  const double y = std::cbrt(Y);
  return (1 - y + y * y - 0.5 * Y) / std::pow(1 - y, 8);
}

double upper_bound_3d(const GasState3D& s, std::optional<double> b, bool finite_range,
                      double R0) {
  s.validate();
  const double base = 4 * pi * s.mu * s.rho * s.a;
  if (!b) return base * upper_ratio_thermodynamic(s.Y());
  require(*b > s.a, "upper bound requires b > a");
  const double x = s.a / *b;
  if (finite_range) {
    require(R0 > 0, "finite-range upper bound needs R0 > 0");
    require(*b > R0, "finite-range upper bound requires b > R0");
    return base * (1 - x * x + 0.5 * x * x * x) / std::pow(1 - x, 4);
  }
  return base * (1 - x + x * x + 0.5 * x * x * x) / std::pow(1 - x, 8);
}

double dyson_lower_constant() { return 1.0 / (10.0 * std::sqrt(2.0)); }

LowerBound lower_bound_3d(const GasState3D& s, double C) {
  s.validate();
  LowerBound out;
  out.raw = 4 * pi * s.mu * s.rho * s.a * (1 - C * std::pow(s.Y(), 1.0 / 17.0));
  out.clamped = out.raw < 0;
  out.value = std::max(0.0, out.raw);
  return out;
}

double lhy_first_coefficient() { return 128.0 / (15.0 * std::sqrt(pi)); }

double lhy_second_coefficient() { return 8.0 * (4.0 * pi / 3.0 - std::sqrt(3.0)); }

double lhy_reference(const GasState3D& s) {
  s.validate();
  const double x = s.rho * s.a * s.a * s.a;
  require(x < 1, "LHY expansion needs rho a^3 < 1");
  return 4 * pi * s.mu * s.rho * s.a *
         (1 + lhy_first_coefficient() * std::sqrt(x) + lhy_second_coefficient() * x * std::log(x));
}

std::optional<double> K_factor(double n, double ell, double R, double R0, double eps, double a) {
  require(R > R0, "cell method requires R > R0");
  require(ell > 0 && a > 0 && n >= 0, "cell method needs ell, a > 0 and n >= 0");
  require(eps >= 0 && eps <= 1, "eps must lie in [0, 1]");
  const double shell = R * R * R - R0 * R0 * R0;
  const double denom = pi * eps / (ell * ell) - 4 * a * n * (n - 1) / (ell * ell * ell);
  if (!(denom > 0)) return std::nullopt;
  const double rho = n / (ell * ell * ell);
  const double edge = 1 - 2 * R / ell;
  return (1 - eps) * edge * edge * edge / (1 + 4 * pi / 3 * rho * shell) *
         (1 - 3 / pi * a * n / (shell * denom));
}

BoxBound finite_box_lower_bound(double n, double ell, double R, double R0, double eps,
                                const GasState3D& s) {
  s.validate();
  BoxBound out;
  const auto K = K_factor(n, ell, R, R0, eps, s.a);
  if (!K) {
    out.trivial = true;
    return out;
  }
  out.K = *K;
  const double v = 4 * pi * s.mu * s.a / (ell * ell * ell) * n * (n - 1) * *K;
  if (!(v > 0)) {
    out.trivial = true;
    return out;
  }
  out.value = v;
  return out;
}

BoxParameters auto_box_parameters(const GasState3D& s, double R0, double c_eps, double c_ell,
                                  double c_R) {
  s.validate();
  require(c_eps > 0 && c_ell > 0 && c_R > 0, "proportionality constants must be positive");
  const double Y = s.Y();
  BoxParameters p;
  p.eps = std::min(1.0, c_eps * std::pow(Y, 1.0 / 17.0));
  p.ell = s.a / (c_ell * std::pow(Y, 6.0 / 17.0));
  const double shell = c_R * std::pow(Y, 3.0 / 17.0) * p.ell * p.ell * p.ell;
  p.R = std::cbrt(R0 * R0 * R0 + shell);
  return p;
}

BoxBound cell_method_lower_bound(const GasState3D& s, double R0, const BoxParameters& p) {
  s.validate();
  BoxBound out;
  const double k = s.rho * p.ell * p.ell * p.ell;
  const auto K = K_factor(4 * k, p.ell, p.R, R0, p.eps, s.a);
  if (!K) {
    out.trivial = true;
    return out;
  }
  out.K = *K;
  const double v = 4 * pi * s.mu * s.a * s.rho * (1 - 1 / k) * *K;
  if (!(v > 0)) {
    out.trivial = true;
    return out;
  }
  out.value = v;
  return out;
}

Bounds2D bounds_2d(const GasState2D& s, std::optional<double> b) {
  s.validate();
  Bounds2D out;
  out.b = b ? *b : 1.0 / std::sqrt(2 * pi * s.rho);
  require(out.b > s.a, "2D upper bound requires b > a");
  const double denom = std::log(out.b / s.a) - pi * s.rho * out.b * out.b;
  if (!(denom > 0)) throw PreconditionError("2D upper bound needs ln(b/a) - pi rho b^2 > 0");
  const double L = s.logY();
  out.upper = 2 * pi * s.mu * s.rho / denom;
  out.leading = 4 * pi * s.mu * s.rho / L;
  out.lower = out.leading;
  out.upper_error = 1.0 / std::log(out.b / s.a);
  out.lower_error = std::pow(L, -0.2);
  return out;
}

double nu_2d(double R, double R0, double a) {
  require(a > 0, "nu needs a > 0");
  require(R > R0 && R0 >= 0, "nu needs R > R0 >= 0");
  auto F = [a](double r) { return r == 0.0 ? 0.0 : r * r * (std::log(r * r / (a * a)) - 1); };
  return 0.25 * (F(R) - F(R0));
}

double SoftPotential::operator()(double r) const {
  return (r > inner && r < outer) ? value : 0.0;
}

SoftPotential annulus_potential(double r1, double r2, int dimension, double a) {
  require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
  require(r2 > r1 && r1 >= 0, "soft potential needs R > R0");
  SoftPotential U;
  U.inner = r1;
  U.outer = r2;
  U.a = a;
  U.dimension = dimension;
  if (dimension == 3) {
    U.value = 3.0 / (r2 * r2 * r2 - r1 * r1 * r1);
    U.normalization = U.value * (r2 * r2 * r2 - r1 * r1 * r1) / 3.0;
  } else {
    const double nu = nu_2d(r2, r1, a);
    require(nu > 0, "2D soft potential needs nu(R) > 0");
    U.value = 1.0 / nu;
    U.normalization = U.value * nu;
  }
  return U;
}

SoftPotential soft_potential(double R, double R0, int dimension, double a) {
  require(R > R0, "soft potential needs R > R0");
  return annulus_potential(R0, R, dimension, a);
}

namespace {

double interp(const std::vector<double>& r, const std::vector<double>& f, double x) {
  if (x <= r.front()) return f.front();
  if (x >= r.back()) return f.back();
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - r.begin());
  const double w = (x - r[j - 1]) / (r[j] - r[j - 1]);
  return (1 - w) * f[j - 1] + w * f[j];
}

// Trapezoid integral of g over [lo, hi] using the sample nodes inside and
// interpolated end values.
template <class G>
double integrate_samples(const std::vector<double>& r, double lo, double hi, G g) {
  if (hi <= lo) return 0.0;
  std::vector<double> x{lo};
  for (double ri : r)
    if (ri > lo && ri < hi) x.push_back(ri);
  x.push_back(hi);
  double s = 0;
  double prev = g(x[0]);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double cur = g(x[i]);
    s += 0.5 * (x[i] - x[i - 1]) * (prev + cur);
    prev = cur;
  }
  return s;
}

}  // namespace

double dyson_lemma_residual(const RadialSamples& psi, const RadialPotential& v,
                            const SoftPotential& U, double R1, double mu) {
  require(psi.r.size() >= 2 && psi.r.size() == psi.f.size() && psi.f.size() == psi.df.size(),
          "radial samples must be non-empty and aligned");
  require(R1 > 0 && R1 <= psi.r.back() * (1 + 1e-14), "R1 must lie inside the sampled ray");
  require(mu > 0, "mu must be positive");
  require(U.dimension == v.dimension, "U and v must share the dimension");
  require(U.inner >= v.R0 * (1 - 1e-14), "inadmissible U: support must lie beyond R0");
  require(U.normalization <= 1 + 1e-12, "inadmissible U: normalisation exceeds 1");
  require(U.value >= 0, "inadmissible U: negative value");
  const int d = v.dimension;
  auto w = [d](double r) { return d == 3 ? r * r : r; };
  const double coef = d == 3 ? U.a : 1.0;
  require(d == 2 || U.a > 0, "3D Dyson lemma needs the scattering length in U.a");

  auto lhs_density = [&](double r) {
    const double f = interp(psi.r, psi.f, r);
    const double df = interp(psi.r, psi.df, r);
    double pot = 0;
    if (r < v.R0) {
      const double vr = v.inner_value(r);
      if (std::isinf(vr)) {
        if (std::abs(f) > 1e-300) return std::numeric_limits<double>::infinity();
      } else {
        pot = 0.5 * vr * f * f;
      }
    }
    return (mu * df * df + pot) * w(r);
  };
  double lhs = 0;
  // Split at R0 so the potential jump is never straddled.
  const double cut = std::min(R1, v.R0);
  lhs += integrate_samples(psi.r, 0.0, cut, [&](double r) {
    return r >= cut ? lhs_density(std::nextafter(cut, 0.0)) : lhs_density(r);
  });
  lhs += integrate_samples(psi.r, cut, R1, [&](double r) {
    const double df = interp(psi.r, psi.df, r);
    return mu * df * df * w(r);
  });
  const double lo = std::max(U.inner, 0.0), hi = std::min(U.outer, R1);
  const double rhs = coef * mu * U.value * integrate_samples(psi.r, lo, hi, [&](double r) {
                       const double f = interp(psi.r, psi.f, r);
                       return f * f * w(r);
                     });
  return lhs - rhs;
}

double temple_bound(double h_mean, double h2_mean, double E1) {
  require(std::isfinite(h_mean) && std::isfinite(h2_mean) && std::isfinite(E1),
          "Temple inputs must be finite");
  if (!(E1 > h_mean)) throw PreconditionError("Temple gap violated");
  double var = h2_mean - h_mean * h_mean;
  const double tol = 1e-13 * std::max(1.0, h2_mean);
  if (var < -tol) throw PreconditionError("Temple variance is negative");
  var = std::max(0.0, var);
  return h_mean - var / (E1 - h_mean);
}

CellMin cell_distribution_min(double k, int p) {
  require(k >= 1 && std::isfinite(k), "k must be >= 1");
  require(p >= 1, "p must be >= 1");
  const double t = std::clamp((p + 1) / 4.0, 1.0, k);
  CellMin out;
  out.t = t;
  out.value = t * (t - 1) + 0.5 * (k - t) * (p - 1);
  return out;
}

double cell_distribution_brute(double k, int p, int n_max) {
  require(k >= 0 && p >= 1, "k >= 0 and p >= 1 required");
  require(n_max >= static_cast<int>(std::ceil(k)), "n_max must be at least k");
  auto f = [p](int n) {
    return n < p ? static_cast<double>(n) * (n - 1) : 0.5 * n * (p - 1.0);
  };
  // The linear program over the simplex attains its minimum at a vertex,
  // i.e. on distributions supported on at most two particle numbers.
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n_max; ++i) {
    if (i > k) break;
    if (i == k) best = std::min(best, f(i));
    for (int j = std::max(i + 1, static_cast<int>(std::ceil(k))); j <= n_max; ++j) {
      if (j < k) continue;
      const double wj = (k - i) / static_cast<double>(j - i);
      best = std::min(best, (1 - wj) * f(i) + wj * f(j));
    }
  }
  return best;
}

double lemma_xb_margin(double x, double b, double k) {
  require(x > 0 && x < 1, "x must lie in (0, 1)");
  require(b > 0 && b < 1, "b must lie in (0, 1)");
  require(k >= 1 && std::isfinite(k), "k must be >= 1");
  const double lx = -std::log(x);
  // log1p keeps |ln b| accurate as b approaches 1.
  const double lb = b > 0.5 ? -std::log1p(b - 1) : -std::log(b);
  // Regrouped so the leading terms do not cancel.
  const double bk = b * k;
  return (bk - x) * (bk - x) / lb + x * x * (1 / lx - 1 / lb) + bk * bk / (4 * lb * lb * lb);
}

}  // namespace bosegas
