#include "bosegas/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "bosegas/errors.hpp"

namespace bosegas::num {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = lo;
    return x;
  }
  for (std::size_t i = 0; i < n; ++i)
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  x.back() = hi;
  return x;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  require(lo > 0 && hi > 0, "logspace needs positive bounds");
  auto e = linspace(std::log(lo), std::log(hi), n);
  for (auto& v : e) v = std::exp(v);
  if (n > 0) {
    e.front() = lo;
    e.back() = hi;
  }
  return e;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0, "fit_line needs distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double simpson(const std::vector<double>& x, const std::vector<double>& f,
               std::size_t i0, std::size_t i1) {
  if (i1 <= i0) return 0.0;
  if (i1 == i0 + 1) return 0.5 * (x[i1] - x[i0]) * (f[i0] + f[i1]);
  double sum = 0;
  std::size_t i = i0;
  for (; i + 2 <= i1; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    sum += (h0 + h1) / 6.0 *
           ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
            (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i < i1) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    const double c = ((f[i + 1] - f[i]) / h1 + (f[i - 1] - f[i]) / h0) / (h0 + h1);
    const double b = (f[i + 1] - f[i]) / h1 - c * h1;
    sum += f[i] * h1 + b * h1 * h1 / 2.0 + c * h1 * h1 * h1 / 3.0;
  }
  return sum;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  double s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& sup,
                                      const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n), x(n);
  double denom = diag[0];
  if (denom == 0.0) throw NumericError("singular tridiagonal system");
  c[0] = n > 1 ? sup[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - sub[i] * c[i - 1];
    if (denom == 0.0) throw NumericError("singular tridiagonal system");
    c[i] = i + 1 < n ? sup[i] / denom : 0.0;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    throw NumericError("root bracket produced non-finite values");
  if ((flo > 0) == (fhi > 0)) throw NumericError("root not bracketed");
  int bits = std::numeric_limits<double>::digits - 2;
  if (rel_tol > 0) bits = std::min(bits, static_cast<int>(-std::log2(rel_tol)) + 1);
  boost::math::tools::eps_tolerance<double> tol(bits);
  std::uintmax_t it = static_cast<std::uintmax_t>(max_iter);
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, it);
  return 0.5 * (r.first + r.second);
}

double find_root_expanding(const std::function<double(double)>& f, double lo,
                           double hi, double rel_tol) {
  double flo = f(lo), fhi = f(hi);
  for (int k = 0; k < 200 && (flo > 0) == (fhi > 0); ++k) {
    if (std::abs(flo) < std::abs(fhi)) {
      lo = lo > 0 ? lo / 4 : lo - (hi - lo);
      flo = f(lo);
    } else {
      hi = hi * 4;
      fhi = f(hi);
    }
  }
  if ((flo > 0) == (fhi > 0)) throw NumericError("bracket expansion failed");
  return find_root(f, lo, hi, rel_tol);
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a,
                           double b, double tol) {
  if (b <= a) return 0.0;
  boost::math::quadrature::tanh_sinh<double> q;
  double err = 0;
  double v = q.integrate(f, a, b, tol, &err);
  if (!std::isfinite(v)) throw NumericError("tanh-sinh quadrature returned non-finite value");
  return v;
}

double integrate_exp_sinh(const std::function<double(double)>& f, double a, double tol) {
  boost::math::quadrature::exp_sinh<double> q;
  double err = 0;
  double v = q.integrate(f, a, std::numeric_limits<double>::infinity(), tol, &err);
  if (!std::isfinite(v)) throw NumericError("exp-sinh quadrature returned non-finite value");
  return v;
}

double integrate_gk(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  double err = 0;
  double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, tol, &err);
  if (!std::isfinite(v)) throw NumericError("Gauss-Kronrod quadrature returned non-finite value");
  return v;
}

LanczosResult lanczos_lowest(const MatVec& apply, const std::vector<double>& start,
                             double tol, int krylov, int restarts) {
  const std::size_t n = start.size();
  auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  };
  LanczosResult out;
  std::vector<double> v = start;
  double nv = std::sqrt(dot(v, v));
  if (nv == 0) throw PreconditionError("Lanczos start vector is zero");
  for (auto& x : v) x /= nv;
  const int kmax = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(krylov), n));
  std::vector<double> w(n);
  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<std::vector<double>> Q;
    std::vector<double> alpha, beta;
    Q.push_back(v);
    for (int j = 0; j < kmax; ++j) {
      apply(Q[j], w);
      const double a = dot(w, Q[j]);
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : Q) {
          const double c = dot(w, q);
          for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
        }
      const double b = std::sqrt(dot(w, w));
      if (j + 1 == kmax || b < 1e-14 * std::max(1.0, std::abs(a))) break;
      beta.push_back(b);
      std::vector<double> next(n);
      for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
      Q.push_back(std::move(next));
    }
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) {
      T(i, i + 1) = beta[static_cast<std::size_t>(i)];
      T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()(0);
    std::vector<double> y(n, 0.0);
    for (int k = 0; k < m; ++k) {
      const double c = es.eigenvectors()(k, 0);
      for (std::size_t i = 0; i < n; ++i) y[i] += c * Q[static_cast<std::size_t>(k)][i];
    }
    const double ny = std::sqrt(dot(y, y));
    for (auto& x : y) x /= ny;
    apply(y, w);
    double res = 0;
    for (std::size_t i = 0; i < n; ++i) res += (w[i] - theta * y[i]) * (w[i] - theta * y[i]);
    res = std::sqrt(res);
    out.eigenvalue = theta;
    out.vector = y;
    out.iterations += m;
    if (res <= tol * std::max(1.0, std::abs(theta))) {
      out.converged = true;
      return out;
    }
    v = y;
  }
  return out;
}

}  // namespace bosegas::num
