#include "bosegas/lieb_liniger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <unistd.h>

#include <Eigen/Dense>

#include "bosegas/errors.hpp"
#include "bosegas/io.hpp"
#include "bosegas/numerics.hpp"

namespace bosegas {

using num::pi;

namespace {

struct RawSolve {
  double G0 = 0, G2 = 0;    // int g, int x^2 g over [-1, 1]
  double dG0 = 0, dG2 = 0;  // derivatives in lambda
};

// Piecewise-linear product integration on nodes x_j = sin(pi j / (2M)) over
// [0, 1]; the even symmetry folds the kernel into K(x - y) + K(x + y).
RawSolve raw_solve(double lam, int M) {
  const int n = M + 1;
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(j) = std::sin(0.5 * pi * j / M);
  x(M) = 1.0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd dA = Eigen::MatrixXd::Zero(n, n);
  const double l2 = lam * lam;
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      const double xi = sign * x(i);
      for (int j = 0; j < M; ++j) {
        const double y0 = x(j), y1 = x(j + 1), h = y1 - y0;
        const double u0 = y0 - xi, u1 = y1 - xi;
        const double q0 = l2 + u0 * u0, q1 = l2 + u1 * u1;
        const double I0 = 2 * (std::atan(u1 / lam) - std::atan(u0 / lam));
        const double I1 = lam * std::log1p((u1 * u1 - u0 * u0) / q0);
        const double dI0 = 2 * (-u1 / q1 + u0 / q0);
        const double dI1 = I1 / lam + 2 * l2 * (1 / q1 - 1 / q0);
        A(i, j) += ((y1 - xi) * I0 - I1) / h;
        A(i, j + 1) += (I1 + (xi - y0) * I0) / h;
        dA(i, j) += ((y1 - xi) * dI0 - dI1) / h;
        dA(i, j + 1) += (dI1 + (xi - y0) * dI0) / h;
      }
    }
  }
  Eigen::MatrixXd Mat = Eigen::MatrixXd::Identity(n, n) - A / (2 * pi);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Mat);
  const Eigen::VectorXd g = lu.solve(Eigen::VectorXd::Constant(n, 1 / (2 * pi)));
  const Eigen::VectorXd dg = lu.solve(dA * g / (2 * pi));
  if (!g.allFinite() || !dg.allFinite()) throw NumericError("Lieb-Liniger solve produced non-finite values");
  // Exact integrals of the linear interpolant.
  Eigen::VectorXd w0 = Eigen::VectorXd::Zero(n), w2 = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < M; ++j) {
    const double a = x(j), b = x(j + 1), h = b - a;
    w0(j) += h / 2;
    w0(j + 1) += h / 2;
    auto P = [&](double c) {
      return (std::pow(b, 4) - std::pow(a, 4)) / 4 - c * (b * b * b - a * a * a) / 3;
    };
    w2(j) += -P(b) / h;
    w2(j + 1) += P(a) / h;
  }
  RawSolve r;
  r.G0 = 2 * w0.dot(g);
  r.G2 = 2 * w2.dot(g);
  r.dG0 = 2 * w0.dot(dg);
  r.dG2 = 2 * w2.dot(dg);
  return r;
}

int default_cells(double lam) {
  const double want = 12.0 / lam;
  int M = 64;
  while (M < want && M < 512) M *= 2;
  return M;
}

}  // namespace

LLPoint ll_solve_lambda(double lambda, int cells) {
  require(lambda > 0 && std::isfinite(lambda), "lambda must be positive");
  const int M = cells > 0 ? cells : default_cells(lambda);
  require(M >= 8 && M % 2 == 0, "cell count must be even and >= 8");
  const RawSolve f = raw_solve(lambda, M);
  const RawSolve c = raw_solve(lambda, M / 2);
  auto rich = [](double a, double b) { return (4 * a - b) / 3; };
  const double G0 = rich(f.G0, c.G0), G2 = rich(f.G2, c.G2);
  const double dG0 = rich(f.dG0, c.dG0), dG2 = rich(f.dG2, c.dG2);
  LLPoint p;
  p.lambda = lambda;
  p.cells = M;
  p.gamma = lambda / G0;
  p.e_gamma = G2 / (G0 * G0 * G0);
  const double dgamma = 1 / G0 - lambda * dG0 / (G0 * G0);
  const double de = dG2 / (G0 * G0 * G0) - 3 * G2 * dG0 / (G0 * G0 * G0 * G0);
  p.de_dgamma = de / dgamma;
  p.dgamma_dlambda = dgamma;
  if (!std::isfinite(p.gamma) || !std::isfinite(p.e_gamma) || !(p.gamma > 0))
    throw NumericError("Lieb-Liniger solve failed");
  return p;
}

LLPoint ll_solve_gamma(double gamma, double lambda_guess) {
  require(gamma > 0 && std::isfinite(gamma), "gamma must be positive");
  // Starting guesses from the weak (gamma ~ (pi lambda / 2)^2) and strong (gamma ~ pi lambda) limits.
  double lam = lambda_guess > 0 ? lambda_guess
                                : (gamma < 1 ? 2 * std::sqrt(gamma) / pi : gamma / pi + 0.6);
  // Panels are fixed from the starting coupling so the iteration sees one
  // smooth discrete map; half the starting lambda guards against undershoot.
  const int M = default_cells(0.5 * lam);
  for (int it = 0; it < 60; ++it) {
    const LLPoint p = ll_solve_lambda(lam, M);
    const double F = std::log(p.gamma / gamma);
    if (std::abs(F) < 1e-14) return p;
    const double slope = lam * p.dgamma_dlambda / p.gamma;
    lam *= std::exp(std::clamp(-F / slope, -2.0, 2.0));
  }
  throw NumericError("Lieb-Liniger coupling search did not converge");
}

double ll_energy_density(double t) {
  require(t >= 0 && std::isfinite(t), "t must be nonnegative");
  if (t == 0) return 0.0;
  return ll_solve_gamma(t / 2).e_gamma;
}

LLCurve LLCurve::from_nodes(std::vector<double> t, std::vector<double> e, std::vector<double> de) {
  require(t.size() >= 4 && t.size() == e.size() && e.size() == de.size(), "curve needs >= 4 aligned nodes");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(t[i] > 0 && e[i] > 0 && std::isfinite(de[i]), "curve nodes must be positive and finite");
    if (i) require(t[i] > t[i - 1] && e[i] > e[i - 1], "curve nodes must increase");
  }
  LLCurve c;
  c.t_ = std::move(t);
  c.e_ = std::move(e);
  c.de_ = std::move(de);
  c.prepare();
  return c;
}

LLCurve LLCurve::build(int nodes, double t_min, double t_max) {
  require(nodes >= 4 && t_min > 0 && t_max > t_min, "invalid curve specification");
  const auto t = num::logspace(t_min, t_max, static_cast<std::size_t>(nodes));
  std::vector<double> e(t.size()), de(t.size());
  double lam = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const LLPoint p = ll_solve_gamma(t[i] / 2, lam);
    lam = p.lambda;
    e[i] = p.e_gamma;
    de[i] = 0.5 * p.de_dgamma;
  }
  return from_nodes(t, e, de);
}

void LLCurve::prepare() {
  const std::size_t n = t_.size();
  x_.resize(n);
  y_.resize(n);
  m_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_[i] = std::log(t_[i]);
    y_[i] = std::log(e_[i]);
    m_[i] = t_[i] * de_[i] / e_[i];
  }
  // Fritsch-Carlson limiter keeps the interpolant monotone.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double delta = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
    if (delta <= 0) {
      m_[k] = m_[k + 1] = 0;
      continue;
    }
    const double a = m_[k] / delta, b = m_[k + 1] / delta;
    if (a < 0) m_[k] = 0;
    if (b < 0) m_[k + 1] = 0;
    const double r = a * a + b * b;
    if (r > 9) {
      const double tau = 3 / std::sqrt(r);
      m_[k] = tau * a * delta;
      m_[k + 1] = tau * b * delta;
    }
  }
}

void LLCurve::eval_log(double x, double& y, double& dy, double& d2y) const {
  const std::size_t n = x_.size();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  k = std::clamp<std::size_t>(k, 1, n - 1) - 1;
  const double h = x_[k + 1] - x_[k];
  const double s = (x - x_[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double y0 = y_[k], y1 = y_[k + 1], m0 = m_[k] * h, m1 = m_[k + 1] * h;
  y = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
  dy = ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * m1) / h;
  d2y = ((12 * s - 6) * y0 + (6 * s - 4) * m0 + (-12 * s + 6) * y1 + (6 * s - 2) * m1) / (h * h);
}

double LLCurve::e(double t) const {
  require(t >= 0 && !std::isnan(t), "t must be nonnegative");
  if (t == 0) return 0.0;
  const double tmin = t_.front(), tmax = t_.back();
  if (t < tmin) return t / 2 - (tmin / 2 - e_.front()) * std::pow(t / tmin, 1.5);
  if (t > tmax) return pi * pi / 3 - (pi * pi / 3 - e_.back()) * (tmax / t);
  double y, dy, d2y;
  eval_log(std::log(t), y, dy, d2y);
  return std::exp(y);
}

double LLCurve::de(double t) const {
  require(t >= 0 && !std::isnan(t), "t must be nonnegative");
  const double tmin = t_.front(), tmax = t_.back();
  if (t < tmin) return 0.5 - 1.5 * (tmin / 2 - e_.front()) * std::sqrt(t / tmin) / tmin;
  if (t > tmax) return (pi * pi / 3 - e_.back()) * tmax / (t * t);
  double y, dy, d2y;
  eval_log(std::log(t), y, dy, d2y);
  return std::exp(y) * dy / t;
}

double LLCurve::d2e(double t) const {
  require(t >= 0 && !std::isnan(t), "t must be nonnegative");
  const double tmin = t_.front(), tmax = t_.back();
  if (t < tmin) {
    if (t == 0) return 0.0;
    return -0.75 * (tmin / 2 - e_.front()) / (std::sqrt(t * tmin) * tmin);
  }
  if (t > tmax) return -2 * (pi * pi / 3 - e_.back()) * tmax / (t * t * t);
  double y, dy, d2y;
  eval_log(std::log(t), y, dy, d2y);
  return std::exp(y) / (t * t) * (dy * dy + d2y - dy);
}

void LLCurve::write_csv(const std::string& path) const {
  io::CsvTable tab;
  tab.header = {"t", "e", "de_dt"};
  for (std::size_t i = 0; i < t_.size(); ++i) tab.rows.push_back({t_[i], e_[i], de_[i]});
  io::write_csv(path, tab);
}

LLCurve LLCurve::read_csv(const std::string& path) {
  const auto tab = io::read_csv(path);
  require(tab.header.size() == 3, "curve file must have columns t, e, de_dt");
  std::vector<double> t, e, de;
  for (const auto& row : tab.rows) {
    if (row.size() != 3) throw IoError("malformed curve row in " + path);
    t.push_back(row[0]);
    e.push_back(row[1]);
    de.push_back(row[2]);
  }
  return from_nodes(std::move(t), std::move(e), std::move(de));
}

const LLCurve& LLCurve::standard() {
  static const LLCurve curve = [] {
    const char* dir = std::getenv("BOSEG_CACHE_DIR");
    std::filesystem::path file;
    if (dir && *dir) {
      file = std::filesystem::path(dir) / "ll_curve_v1.csv";
      std::error_code ec;
      if (std::filesystem::exists(file, ec)) {
        try {
          auto c = read_csv(file.string());
          if (c.t_nodes().size() == static_cast<std::size_t>(default_nodes)) return c;
        } catch (const Error&) {
          // Rebuild below on any unreadable cache.
        }
      }
    }
    LLCurve c = build();
    if (!file.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(file.parent_path(), ec);
      const auto tmp = file.string() + ".tmp" + std::to_string(static_cast<long>(::getpid()));
      try {
        c.write_csv(tmp);
        std::filesystem::rename(tmp, file, ec);
      } catch (const Error&) {
        std::filesystem::remove(tmp, ec);
      }
    }
    return c;
  }();
  return curve;
}

}  // namespace bosegas
