#include "bosegas/oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Sparse>

#include "bosegas/errors.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/radial_functional.hpp"

namespace bosegas {

using num::pi;
using cplx = std::complex<double>;

// ---------------------------------------------------------------- twisted Laplacian

double twisted_ground_exact(double L, double phi) {
  require(L > 0, "L must be positive");
  const double m = std::round(-phi / (2 * pi));
  double best = std::numeric_limits<double>::infinity();
  for (double k = m - 1; k <= m + 1; k += 1) best = std::min(best, std::pow((2 * pi * k + phi) / L, 2));
  return best;
}

TwistedSpectrum twisted_spectrum(double L, double phi, int n_grid, int n_eigs, SpectrumMethod method) {
  require(L > 0, "L must be positive");
  require(std::abs(phi) <= pi + 1e-15, "twisted spectrum needs |phi| <= pi");
  require(n_eigs >= 1, "need at least one eigenvalue");
  TwistedSpectrum out;
  if (method == SpectrumMethod::plane_wave) {
    for (int m = -n_eigs - 1; m <= n_eigs + 1; ++m) out.eigenvalues.push_back(std::pow((2 * pi * m + phi) / L, 2));
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    out.eigenvalues.resize(static_cast<std::size_t>(n_eigs));
    return out;
  }
  require(n_grid >= 3, "finite differences need at least 3 points");
  require(n_eigs <= n_grid, "more eigenvalues requested than grid points");
  const double h = L / n_grid;
  const double c = 1.0 / (h * h);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n_grid, n_grid);
  for (int i = 0; i < n_grid; ++i) {
    H(i, i) = 2 * c;
    if (i + 1 < n_grid) {
      H(i, i + 1) = -c;
      H(i + 1, i) = -c;
    }
  }
  // twisted periodicity v(z + L) = e^{i phi} v(z)
  H(n_grid - 1, 0) = -c * std::polar(1.0, phi);
  H(0, n_grid - 1) = -c * std::polar(1.0, -phi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  for (int i = 0; i < n_eigs; ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  out.ground.resize(static_cast<std::size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) out.ground[static_cast<std::size_t>(i)] = es.eigenvectors()(i, 0);
  return out;
}

// ---------------------------------------------------------------- Poincare checks

void DiscreteField::validate() const {
  require(n >= 1 && L > 0, "field needs n >= 1 and L > 0");
  const std::size_t N = static_cast<std::size_t>(n) * n * n;
  require(f.size() == N, "field values do not match the grid");
  for (const auto& g : grad) require(g.size() == N, "field gradients do not match the grid");
}

namespace {

// out(i,j,k) = sum_{a,b,c} coef(a,b,c) X(i,a) Y(j,b) Z(k,c), staged.
std::vector<cplx> contract(const std::vector<cplx>& coef, int m, const Eigen::MatrixXcd& X,
                           const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& Z) {
  const int n = static_cast<int>(X.rows());
  std::vector<cplx> s1(static_cast<std::size_t>(m) * m * n), s2(static_cast<std::size_t>(m) * n * n),
      out(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) {
        cplx s = 0;
        for (int c = 0; c < m; ++c) s += coef[(static_cast<std::size_t>(a) * m + b) * m + c] * Z(k, c);
        s1[(static_cast<std::size_t>(a) * m + b) * n + k] = s;
      }
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        cplx s = 0;
        for (int b = 0; b < m; ++b) s += Y(j, b) * s1[(static_cast<std::size_t>(a) * m + b) * n + k];
        s2[(static_cast<std::size_t>(a) * n + j) * n + k] = s;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        cplx s = 0;
        for (int a = 0; a < m; ++a) s += X(i, a) * s2[(static_cast<std::size_t>(a) * n + j) * n + k];
        out[(static_cast<std::size_t>(i) * n + j) * n + k] = s;
      }
  return out;
}

}  // namespace

DiscreteField random_field(Boundary boundary, int n, double L, int max_mode, std::mt19937_64& rng) {
  require(n >= 1 && L > 0 && max_mode >= 0, "invalid random field request");
  require(boundary != Boundary::dirichlet, "random fields are Neumann (cosine) or periodic (Fourier)");
  const bool periodic = boundary == Boundary::periodic;
  const int m = periodic ? 2 * max_mode + 1 : max_mode + 1;
  std::normal_distribution<double> gauss;
  std::vector<cplx> coef(static_cast<std::size_t>(m) * m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const int ka = periodic ? a - max_mode : a;
        const int kb = periodic ? b - max_mode : b;
        const int kc = periodic ? c - max_mode : c;
        const double damp = 1.0 / (1.0 + ka * ka + kb * kb + kc * kc);
        const double re = gauss(rng);
        const double im = periodic ? gauss(rng) : 0.0;
        coef[(static_cast<std::size_t>(a) * m + b) * m + c] = damp * cplx(re, im);
      }
  Eigen::MatrixXcd B(n, m), D(n, m);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * L / n;
    for (int a = 0; a < m; ++a) {
      if (periodic) {
        const double k = 2 * pi * (a - max_mode) / L;
        B(i, a) = std::polar(1.0, k * x);
        D(i, a) = cplx(0, k) * B(i, a);
      } else {
        const double k = pi * a / L;
        B(i, a) = std::cos(k * x);
        D(i, a) = -k * std::sin(k * x);
      }
    }
  }
  DiscreteField out;
  out.n = n;
  out.L = L;
  out.boundary = boundary;
  out.f = contract(coef, m, B, B, B);
  out.grad[0] = contract(coef, m, D, B, B);
  out.grad[1] = contract(coef, m, B, D, B);
  out.grad[2] = contract(coef, m, B, B, D);
  return out;
}

std::vector<bool> random_omega_complement(int n, int blocks, double fraction, std::mt19937_64& rng) {
  require(blocks >= 1 && n % blocks == 0, "grid size must be a multiple of the block count");
  require(fraction >= 0 && fraction <= 1, "fraction must lie in [0, 1]");
  const int nb = blocks * blocks * blocks;
  std::vector<int> ids(static_cast<std::size_t>(nb));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  const int count = static_cast<int>(std::lround(fraction * nb));
  std::vector<bool> chosen(static_cast<std::size_t>(nb), false);
  for (int i = 0; i < count; ++i) chosen[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = true;
  const int s = n / blocks;
  std::vector<bool> mask(static_cast<std::size_t>(n) * n * n, false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        mask[(static_cast<std::size_t>(i) * n + j) * n + k] =
            chosen[static_cast<std::size_t>(((i / s) * blocks + j / s) * blocks + k / s)];
  return mask;
}

std::vector<double> default_weight(const DiscreteField& f) {
  std::vector<double> h(f.size());
  const double vol = std::pow(f.L, 3);
  for (int i = 0; i < f.n; ++i) {
    const double x = (i + 0.5) * f.L / f.n;
    const double v = (1.0 + 0.5 * std::cos(pi * x / f.L)) / vol;
    for (int j = 0; j < f.n; ++j)
      for (int k = 0; k < f.n; ++k) h[f.index(i, j, k)] = v;
  }
  return h;
}

void project_weighted_mean(DiscreteField& f, const std::vector<double>& h) {
  require(h.size() == f.size(), "weight does not match the grid");
  const double dV = f.cell_volume();
  cplx s = 0;
  double mass = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += f.f[i] * h[i] * dV;
    mass += h[i] * dV;
  }
  for (auto& v : f.f) v -= s / mass;
}

PoincareResult poincare_check(PoincareVariant variant, const DiscreteField& f,
                              const std::vector<bool>& omega_complement, const PoincareParams& params) {
  f.validate();
  require(omega_complement.size() == f.size(), "Omega mask does not match the grid");
  const std::size_t N = f.size();
  const double dV = f.cell_volume();
  const double L = f.L;
  const std::size_t nc = static_cast<std::size_t>(std::count(omega_complement.begin(), omega_complement.end(), true));
  require(nc < N, "Omega is empty");
  PoincareResult out;
  out.omega_c_fraction = static_cast<double>(nc) / static_cast<double>(N);
  const double Vc = out.omega_c_fraction * L * L * L;

  cplx mean = 0;
  for (const auto& v : f.f) mean += v;
  mean /= static_cast<double>(N);
  double norm2 = 0, dev2 = 0, grad_in = 0, grad_all = 0;
  const double A = variant == PoincareVariant::vector_potential ? params.phi / L : 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    norm2 += std::norm(f.f[i]) * dV;
    dev2 += std::norm(f.f[i] - mean) * dV;
    const cplx gz = f.grad[2][i] + cplx(0, A) * f.f[i];
    const double g2 = (std::norm(f.grad[0][i]) + std::norm(f.grad[1][i]) + std::norm(gz)) * dV;
    grad_all += g2;
    if (!omega_complement[i]) grad_in += g2;
  }

  auto finish = [&](double lhs, double rhs) {
    out.lhs = lhs;
    out.rhs = rhs;
    if (lhs <= 0) {
      out.ratio = 0;
    } else if (rhs <= 0) {
      out.ratio = std::numeric_limits<double>::infinity();
      out.finite = false;
    } else {
      out.ratio = lhs / rhs;
    }
    return out;
  };

  switch (variant) {
    case PoincareVariant::homogeneous:
      return finish(dev2, L * L * grad_in + std::pow(Vc, 2.0 / 3.0) * grad_all);
    case PoincareVariant::inhomogeneous: {
      const std::vector<double> h = params.h.empty() ? default_weight(f) : params.h;
      require(h.size() == N, "weight does not match the grid");
      double hint = 0, h2 = 0;
      cplx fh = 0;
      for (std::size_t i = 0; i < N; ++i) {
        hint += h[i] * dV;
        h2 += h[i] * h[i] * dV;
        fh += f.f[i] * h[i] * dV;
      }
      require(std::abs(hint - 1) < 1e-8, "weight h must integrate to 1");
      require(std::abs(fh) <= 1e-8 * std::sqrt(norm2 * h2) + 1e-300, "f must satisfy int f h = 0");
      return finish(norm2, grad_in + std::pow(out.omega_c_fraction, 2.0 / 3.0) * grad_all);
    }
    case PoincareVariant::vector_potential: {
      require(f.boundary == Boundary::periodic, "vector-potential check needs a periodic field");
      require(std::abs(params.phi) < pi, "vector-potential check needs |phi| < pi");
      const double c = params.c >= 0 ? params.c : 2 * pi * (pi - std::abs(params.phi));
      const double num = params.phi * params.phi / (L * L) * norm2 + c / (L * L) * dev2 - grad_in;
      const double den = (grad_all + norm2 / (L * L)) * std::sqrt(out.omega_c_fraction);
      out.lhs = num;
      out.rhs = den;
      if (nc == 0) {
        out.ratio = num <= 1e-12 * (grad_all + norm2 / (L * L)) ? 0.0 : std::numeric_limits<double>::infinity();
        out.finite = std::isfinite(out.ratio);
      } else {
        out.ratio = num / den;
      }
      return out;
    }
  }
  return out;
}

PoincareCalibration poincare_calibrate(PoincareVariant variant, int cases, int n, std::uint64_t seed, double L,
                                       double phi) {
  require(cases >= 1, "corpus needs at least one case");
  constexpr int blocks = 8;
  constexpr int modes = 3;
  PoincareCalibration cal;
  cal.max_ratio = -std::numeric_limits<double>::infinity();
  cal.max_ratio_nonempty = -std::numeric_limits<double>::infinity();
  cal.cases = cases;
  cal.seed = seed;
  cal.n = n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.0, 0.5);
  const Boundary b = variant == PoincareVariant::vector_potential ? Boundary::periodic : Boundary::neumann;
  PoincareParams params;
  params.phi = phi;
  for (int i = 0; i < cases; ++i) {
    auto f = random_field(b, n, L, modes, rng);
    const double fr = i == 0 ? 0.0 : frac(rng);
    const auto mask = random_omega_complement(n, blocks, fr, rng);
    if (variant == PoincareVariant::inhomogeneous) project_weighted_mean(f, default_weight(f));
    const auto r = poincare_check(variant, f, mask, params);
    bool bad = !r.finite;
    if (r.omega_c_fraction == 0 && variant == PoincareVariant::homogeneous)
      bad = bad || r.ratio > 1.0 / (pi * pi) * (1 + 1e-9);
    cal.counterexamples += bad ? 1 : 0;
    cal.ratios.push_back(r.ratio);
    if (std::isfinite(r.ratio)) {
      cal.max_ratio = std::max(cal.max_ratio, r.ratio);
      if (r.omega_c_fraction > 0) cal.max_ratio_nonempty = std::max(cal.max_ratio_nonempty, r.ratio);
    }
  }
  cal.C_hat = std::max(cal.max_ratio, 0.0);
  return cal;
}

// ---------------------------------------------------------------- band matrix localisation

void BandMatrixCase::validate() const {
  require(A.rows() == A.cols() && A.rows() >= 1, "A must be square");
  require(psi.size() == A.rows(), "psi does not match A");
  require(std::abs(psi.norm() - 1) < 1e-10, "psi must be normalised");
  require(M >= 1 && M <= A.rows(), "window length must satisfy 1 <= M <= N + 1");
  require((A - A.adjoint()).norm() <= 1e-12 * std::max(1.0, A.norm()), "A must be Hermitian");
}

bool Localization::holds(double C, double tol) const {
  return lhs <= lambda + C * (near_sum + far_sum) + tol * std::max(1.0, std::abs(lambda));
}

Localization localize_band_matrix(const BandMatrixCase& c) {
  c.validate();
  const int n1 = static_cast<int>(c.A.rows());
  Localization out;
  out.d.assign(static_cast<std::size_t>(n1), 0.0);
  for (int i = 0; i < n1; ++i) out.d[0] += std::norm(c.psi(i)) * c.A(i, i).real();
  for (int k = 1; k < n1; ++k)
    for (int i = 0; i + k < n1; ++i)
      out.d[static_cast<std::size_t>(k)] += 2 * (std::conj(c.psi(i)) * c.A(i, i + k) * c.psi(i + k)).real();
  out.lambda = std::accumulate(out.d.begin(), out.d.end(), 0.0);
  const int M = c.M;
  for (int k = 1; k < n1; ++k) {
    const double a = std::abs(out.d[static_cast<std::size_t>(k)]);
    if (k < M)
      out.near_sum += static_cast<double>(k) * k * a / (static_cast<double>(M) * M);
    else
      out.far_sum += a;
  }
  out.lhs = std::numeric_limits<double>::infinity();
  for (int s = 0; s + M <= n1; ++s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c.A.block(s, s, M, M));
    if (es.eigenvalues()(0) < out.lhs) {
      out.lhs = es.eigenvalues()(0);
      out.n = s;
      out.phi = Eigen::VectorXcd::Zero(n1);
      out.phi.segment(s, M) = es.eigenvectors().col(0);
    }
  }
  if (out.lhs > out.lambda) {
    const double err = out.near_sum + out.far_sum;
    out.C_required = err > 0 ? (out.lhs - out.lambda) / err : std::numeric_limits<double>::infinity();
  }
  return out;
}

BandCalibration localize_calibrate(int cases, int N, int M, std::uint64_t seed, double C) {
  require(cases >= 1 && N >= 1, "need at least one case and N >= 1");
  BandCalibration cal;
  cal.cases = cases;
  cal.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int c = 0; c < cases; ++c) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
      A(i, i) = gauss(rng);
      if (i < N) A(i, i + 1) = A(i + 1, i) = gauss(rng);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    BandMatrixCase bc;
    bc.A = A.cast<cplx>();
    bc.psi = es.eigenvectors().col(0).cast<cplx>();
    bc.M = M;
    const auto loc = localize_band_matrix(bc);
    cal.worst_C = std::max(cal.worst_C, loc.C_required);
    cal.failures += loc.holds(C) ? 0 : 1;
  }
  return cal;
}

// ---------------------------------------------------------------- small exact diagonalisation

namespace {

// Lowest eigenvalue of a sparse symmetric matrix with a positive ground state.
// `invert` selects shift-invert Lanczos; the sparse factor is cheap for two
// particles and fills in badly for three.
double lowest_eigenvalue(const Eigen::SparseMatrix<double>& H, bool invert) {
  const auto dim = H.rows();
  if (dim <= 1500) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(H), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
  if (!invert) {
    std::vector<double> start(static_cast<std::size_t>(dim), 1.0);
    auto apply = [&H](const std::vector<double>& x, std::vector<double>& y) {
      Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
      Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
      yv = H * xv;
    };
    const auto r = num::lanczos_lowest(apply, start, 1e-10, 60, 200);
    if (!r.converged) throw NumericError("Lanczos did not converge in the exact diagonalisation");
    return r.eigenvalue;
  }
  // Lanczos on -(H + 1)^-1: H >= 0, and the inverse separates the low end
  // of the lattice spectrum far better than H itself.
  Eigen::SparseMatrix<double> K = H;
  for (Eigen::Index i = 0; i < dim; ++i) K.coeffRef(i, i) += 1.0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success) throw NumericError("factorisation failed in the exact diagonalisation");
  std::vector<double> start(static_cast<std::size_t>(dim), 1.0);
  auto apply = [&ldlt](const std::vector<double>& x, std::vector<double>& y) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    yv = -ldlt.solve(xv);
  };
  const auto r = num::lanczos_lowest(apply, start, 1e-13, 40, 50);
  if (!r.converged) throw NumericError("Lanczos did not converge in the exact diagonalisation");
  return -1.0 / r.eigenvalue - 1.0;
}

}  // namespace

double delta_gas_lattice_energy(int n, double ell, double g, Boundary boundary, int sites) {
  require(n >= 1 && n <= 3, "exact diagonalisation supports 1 <= n <= 3");
  require(ell > 0 && g >= 0, "ell must be positive and g nonnegative");
  require(sites >= 4, "lattice needs at least 4 sites");
  const double h = ell / sites;
  // Single-particle hopping matrix.
  const int M = boundary == Boundary::dirichlet ? sites - 1 : sites;
  std::vector<double> diag(static_cast<std::size_t>(M), 2 / (h * h));
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < M; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::periodic) bonds.emplace_back(M - 1, 0);
  if (boundary == Boundary::neumann) {
    diag.front() = 1 / (h * h);
    diag.back() = 1 / (h * h);
  }
  const double t = -1 / (h * h);
  const double U = g / h;

  // Multisets i1 <= ... <= in, indexed through a dense key table.
  std::size_t keyspace = 1;
  for (int k = 0; k < n; ++k) keyspace *= static_cast<std::size_t>(M);
  std::vector<std::array<int, 3>> states;
  std::vector<int> index(keyspace, -1);
  auto key = [&](const std::array<int, 3>& s) {
    std::size_t k = 0;
    for (int a = 0; a < n; ++a) k = k * static_cast<std::size_t>(M) + static_cast<std::size_t>(s[static_cast<std::size_t>(a)]);
    return k;
  };
  {
    std::array<int, 3> s{0, 0, 0};
    std::function<void(int, int)> rec = [&](int pos, int lo) {
      if (pos == n) {
        index[key(s)] = static_cast<int>(states.size());
        states.push_back(s);
        return;
      }
      for (int i = lo; i < M; ++i) {
        s[static_cast<std::size_t>(pos)] = i;
        rec(pos + 1, i);
      }
    };
    rec(0, 0);
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t si = 0; si < states.size(); ++si) {
    const auto& s = states[si];
    // occupations
    std::array<std::pair<int, int>, 3> occ{};
    int nocc = 0;
    for (int a = 0; a < n; ++a) {
      const int site = s[static_cast<std::size_t>(a)];
      if (nocc > 0 && occ[static_cast<std::size_t>(nocc - 1)].first == site)
        ++occ[static_cast<std::size_t>(nocc - 1)].second;
      else
        occ[static_cast<std::size_t>(nocc++)] = {site, 1};
    }
    double d = 0;
    for (int o = 0; o < nocc; ++o) {
      const auto [site, cnt] = occ[static_cast<std::size_t>(o)];
      d += diag[static_cast<std::size_t>(site)] * cnt + U * cnt * (cnt - 1) / 2.0;
    }
    trip.emplace_back(static_cast<int>(si), static_cast<int>(si), d);
    // hopping a_j^dag a_i from each occupied site i to its neighbours j
    for (int o = 0; o < nocc; ++o) {
      const auto [site, cnt] = occ[static_cast<std::size_t>(o)];
      for (const auto& [p, q] : bonds) {
        int to = -1;
        if (p == site) to = q;
        else if (q == site) to = p;
        if (to < 0) continue;
        std::array<int, 3> t2 = s;
        for (int a = 0; a < n; ++a)
          if (t2[static_cast<std::size_t>(a)] == site) {
            t2[static_cast<std::size_t>(a)] = to;
            break;
          }
        std::sort(t2.begin(), t2.begin() + n);
        int nto = 0;
        for (int a = 0; a < n; ++a) nto += s[static_cast<std::size_t>(a)] == to ? 1 : 0;
        const double amp = t * std::sqrt(static_cast<double>(cnt) * (nto + 1));
        trip.emplace_back(index[key(t2)], static_cast<int>(si), amp);
      }
    }
  }
  Eigen::SparseMatrix<double> H(static_cast<Eigen::Index>(states.size()), static_cast<Eigen::Index>(states.size()));
  H.setFromTriplets(trip.begin(), trip.end());
  return lowest_eigenvalue(H, n <= 2);
}

ExactDiag1D exact_diag_delta_gas_1d(int n, double ell, double g, Boundary boundary, int sites) {
  require(n >= 1 && n <= 3, "exact diagonalisation supports 1 <= n <= 3");
  require(ell > 0 && g >= 0 && std::isfinite(g), "ell must be positive and g finite and nonnegative");
  if (sites == 0) {
    const int cap = n == 3 ? 48 : 256;
    sites = std::clamp(static_cast<int>(std::ceil(4 * g * ell)), 32, cap);
    sites += sites % 2;
  }
  require(sites >= 4, "lattice needs at least 4 sites");
  ExactDiag1D out;
  out.sites = sites;
  out.E_coarse = delta_gas_lattice_energy(n, ell, g, boundary, sites);
  out.E_fine = delta_gas_lattice_energy(n, ell, g, boundary, 2 * sites);
  out.E0 = (4 * out.E_fine - out.E_coarse) / 3;
  out.extrapolation_gap = std::abs(out.E_fine - out.E0) / std::max(std::abs(out.E0), 1.0);
  return out;
}

double free_fermion_ring_energy(int n, double ell) {
  require(n >= 1 && ell > 0, "need n >= 1 and ell > 0");
  const double shift = n % 2 == 0 ? 0.5 : 0.0;
  std::vector<double> k2;
  for (int j = -n; j <= n; ++j) k2.push_back(std::pow(2 * pi * (j + shift) / ell, 2));
  std::sort(k2.begin(), k2.end());
  return std::accumulate(k2.begin(), k2.begin() + n, 0.0);
}

// ---------------------------------------------------------------- truncated Fock check

FockGround fock_quadratic_ground(double A, double B_plus, double B_minus, int cutoff) {
  require(A >= 0 && B_plus >= 0 && B_minus >= 0, "A, B_plus and B_minus must be nonnegative");
  require(cutoff >= 2, "cutoff must allow at least 2 quanta per mode");
  FockGround out;
  out.cutoff = cutoff;
  if (B_minus == 0) {
    // Modes (+,+) and (-,+); the e = - modes only carry A n >= 0.
    const double B = B_plus;
    const int d = cutoff + 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      H(k, k) = 2 * (A + B) * k;
      if (k + 1 < d) H(k, k + 1) = H(k + 1, k) = B * (k + 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    out.E0 = es.eigenvalues()(0);
    out.modes = 2;
    out.dimension = static_cast<std::size_t>(d);
    return out;
  }
  // Modes 0:(+,+) 1:(+,-) 2:(-,+) 3:(-,-); sector n0 + n1 = n2 + n3.
  const int c1 = cutoff + 1;
  std::size_t dim = 0;
  for (int m = 0; m <= 2 * cutoff; ++m) {
    const std::size_t cnt = static_cast<std::size_t>(std::min(m, 2 * cutoff - m) + 1);
    dim += cnt * cnt;
  }
  require(dim <= 20000, "Fock space too large: lower the cutoff");
  std::vector<int> index(static_cast<std::size_t>(c1) * c1 * c1 * c1, -1);
  std::vector<std::array<int, 4>> states;
  auto key = [c1](const std::array<int, 4>& s) {
    return ((static_cast<std::size_t>(s[0]) * c1 + s[1]) * c1 + s[2]) * c1 + s[3];
  };
  for (int a = 0; a < c1; ++a)
    for (int b = 0; b < c1; ++b)
      for (int c = 0; c < c1; ++c)
        for (int d = 0; d < c1; ++d)
          if (a + b == c + d) {
            std::array<int, 4> s{a, b, c, d};
            index[key(s)] = static_cast<int>(states.size());
            states.push_back(s);
          }
  const double sp = std::sqrt(B_plus), sm = -std::sqrt(B_minus);
  const std::array<double, 4> se{sp, sm, sp, sm};  // e sqrt(B_e) per mode
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t si = 0; si < states.size(); ++si) {
    const auto& s = states[si];
    const int col = static_cast<int>(si);
    double diag = 0;
    for (int m = 0; m < 4; ++m) diag += (A + se[static_cast<std::size_t>(m)] * se[static_cast<std::size_t>(m)]) * s[static_cast<std::size_t>(m)];
    trip.emplace_back(col, col, diag);
    // b*_{tau e} b_{tau e'} with e != e' within tau = + (0,1) and tau = - (2,3)
    for (auto [p, q] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{2, 3}, std::pair{3, 2}}) {
      if (s[static_cast<std::size_t>(q)] == 0 || s[static_cast<std::size_t>(p)] == cutoff) continue;
      auto t = s;
      --t[static_cast<std::size_t>(q)];
      ++t[static_cast<std::size_t>(p)];
      const double amp = se[static_cast<std::size_t>(p)] * se[static_cast<std::size_t>(q)] *
                         std::sqrt(static_cast<double>(s[static_cast<std::size_t>(q)]) * (s[static_cast<std::size_t>(p)] + 1));
      trip.emplace_back(index[key(t)], col, amp);
    }
    // b*_{+e} b*_{-e'} and its adjoint
    for (int p : {0, 1})
      for (int q : {2, 3}) {
        const double w = se[static_cast<std::size_t>(p)] * se[static_cast<std::size_t>(q)];
        if (s[static_cast<std::size_t>(p)] < cutoff && s[static_cast<std::size_t>(q)] < cutoff) {
          auto t = s;
          ++t[static_cast<std::size_t>(p)];
          ++t[static_cast<std::size_t>(q)];
          const double amp =
              w * std::sqrt(static_cast<double>(s[static_cast<std::size_t>(p)] + 1) * (s[static_cast<std::size_t>(q)] + 1));
          trip.emplace_back(index[key(t)], col, amp);
        }
        if (s[static_cast<std::size_t>(p)] > 0 && s[static_cast<std::size_t>(q)] > 0) {
          auto t = s;
          --t[static_cast<std::size_t>(p)];
          --t[static_cast<std::size_t>(q)];
          const double amp =
              w * std::sqrt(static_cast<double>(s[static_cast<std::size_t>(p)]) * s[static_cast<std::size_t>(q)]);
          trip.emplace_back(index[key(t)], col, amp);
        }
      }
  }
  Eigen::SparseMatrix<double> H(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  H.setFromTriplets(trip.begin(), trip.end());
  if (dim <= 4000) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(H), Eigen::EigenvaluesOnly);
    out.E0 = es.eigenvalues()(0);
  } else {
    std::vector<double> start(dim, 0.0);
    start[static_cast<std::size_t>(index[0])] = 1.0;
    auto apply = [&H](const std::vector<double>& x, std::vector<double>& y) {
      Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
      Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
      yv = H * xv;
    };
    const auto r = num::lanczos_lowest(apply, start, 1e-11, 80, 200);
    if (!r.converged) throw NumericError("Lanczos did not converge for the Fock problem");
    out.E0 = r.eigenvalue;
  }
  out.modes = 4;
  out.dimension = dim;
  return out;
}

// ---------------------------------------------------------------- finite-difference gradients

FDCheck fd_gradient_check(FDFunctional id, const std::vector<double>& point, const std::vector<double>& direction,
                          const std::vector<double>& h_list) {
  require(point.size() >= 8 && point.size() == direction.size(), "point and direction must match (>= 8 cells)");
  require(!h_list.empty(), "need at least one step");
  const RadialGrid grid = make_radial_grid(3, point.size(), 6.0);
  const double c = 1.0;
  std::function<double(const std::vector<double>&)> E;
  double analytic = 0;
  RadialFunctional f;
  f.grid = &grid;
  f.kinetic = 1.0;
  f.V.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f.V[i] = grid.r[i] * grid.r[i];
  if (id == FDFunctional::tf) {
    E = [&](const std::vector<double>& rho) {
      double s = 0;
      for (std::size_t i = 0; i < rho.size(); ++i) s += grid.w[i] * (f.V[i] * rho[i] + c * rho[i] * rho[i]);
      return s;
    };
    for (std::size_t i = 0; i < point.size(); ++i) analytic += grid.w[i] * (f.V[i] + 2 * c * point[i]) * direction[i];
  } else {
    f.term = id == FDFunctional::gp ? quadratic_term(c) : zero_term();
    E = [&](const std::vector<double>& phi) { return f.energy(phi); };
    const auto Hphi = f.apply_H(point);
    for (std::size_t i = 0; i < point.size(); ++i) analytic += 2 * grid.w[i] * Hphi[i] * direction[i];
  }
  FDCheck out;
  out.analytic = analytic;
  std::vector<double> lx, ly;
  for (double h : h_list) {
    require(h > 0, "steps must be positive");
    std::vector<double> p = point, m = point;
    for (std::size_t i = 0; i < point.size(); ++i) {
      p[i] += h * direction[i];
      m[i] -= h * direction[i];
    }
    const double fd = (E(p) - E(m)) / (2 * h);
    if (!std::isfinite(fd)) throw NumericError("non-finite finite difference");
    const double dev = std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300);
    out.h.push_back(h);
    out.deviation.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
    if (dev > 1e-13) {
      lx.push_back(std::log(h));
      ly.push_back(std::log(dev));
    }
  }
  if (lx.size() >= 2) out.slope = num::fit_line(lx, ly).slope;
  return out;
}

}  // namespace bosegas
