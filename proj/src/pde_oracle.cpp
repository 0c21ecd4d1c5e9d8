#include "casimir/pde_oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "casimir/error.hpp"

namespace casimir {
namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Tridiagonal solve of (V'' - c V) = 0 on n intervals, V = 1 at both ends.
std::vector<double> thomas_parity(double c, double h, int n) {
  std::vector<double> v(n + 1, 1.0);
  const int m = n - 1;  // interior unknowns j = 1..n-1
  if (m <= 0) return v;
  const double diag = -2.0 - c * h * h;
  std::vector<double> cp(m), dp(m);
  // a = b = 1 off-diagonal; rhs -1 next to each boundary.
  for (int k = 0; k < m; ++k) {
    const double rhs = (k == 0 ? -1.0 : 0.0) + (k == m - 1 ? -1.0 : 0.0);
    const double denom = diag - (k > 0 ? cp[k - 1] : 0.0);
    if (denom == 0.0 || !std::isfinite(denom)) throw Error(ErrorCode::SingularSystem, "tridiagonal pivot vanished");
    cp[k] = 1.0 / denom;
    dp[k] = (rhs - (k > 0 ? dp[k - 1] : 0.0)) / denom;
  }
  v[m] = dp[m - 1];
  for (int k = m - 2; k >= 0; --k) v[k + 1] = dp[k] - cp[k] * v[k + 2];
  return v;
}

// -dW/dy (x_i, x_i+) / 2, one-sided second order; needs i <= n - 2.
double diagonal_rho(const ParityField2D& f, int i) {
  return -0.5 * (-3.0 * f(i, i) + 4.0 * f(i, i + 1) - f(i, i + 2)) / (2.0 * f.h);
}

double one_sided_rho(const std::vector<double>& v, double h) {
  return -0.5 * (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
}

// Ghost-node Neumann operator A w = -(Delta_h w) + 4 beta w, scaled by the
// boundary weights c_i c_j (c = 1/2 on edges) which makes it symmetric.
class NeumannOperator {
 public:
  NeumannOperator(int n, double h, double beta) : n_(n), inv_h2_(1.0 / (h * h)), shift_(4.0 * beta) {}

  double weight(int i) const { return (i == 0 || i == n_) ? 0.5 : 1.0; }

  void apply(const std::vector<double>& w, std::vector<double>& out) const {
    const int N = n_ + 1;
    for (int i = 0; i <= n_; ++i) {
      const int im = (i == 0) ? 1 : i - 1;
      const int ip = (i == n_) ? n_ - 1 : i + 1;
      const double ci = weight(i);
      const double* row = &w[static_cast<std::size_t>(i) * N];
      const double* rm = &w[static_cast<std::size_t>(im) * N];
      const double* rp = &w[static_cast<std::size_t>(ip) * N];
      double* o = &out[static_cast<std::size_t>(i) * N];
      for (int j = 0; j <= n_; ++j) {
        const int jm = (j == 0) ? 1 : j - 1;
        const int jp = (j == n_) ? n_ - 1 : j + 1;
        const double lap = (rm[j] + rp[j] + row[jm] + row[jp] - 4.0 * row[j]) * inv_h2_;
        o[j] = ci * weight(j) * (-lap + shift_ * row[j]);
      }
    }
  }

 private:
  int n_;
  double inv_h2_, shift_;
};

double forcing_value(Forcing f, int i, int j) {
  if (f == Forcing::Unit) return 1.0;
  return (j > i) ? 1.0 : (j < i ? -1.0 : 0.0);
}

void solve_cg(ParityField2D& field, const Solve2DOptions& opt) {
  const int n = field.n;
  const std::size_t size = static_cast<std::size_t>(n + 1) * (n + 1);
  const NeumannOperator A(n, field.h, field.beta);
  std::vector<double> b(size), r(size), p(size), Ap(size);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      b[static_cast<std::size_t>(i) * (n + 1) + j] =
          A.weight(i) * A.weight(j) * (-4.0 * field.beta * forcing_value(field.forcing, i, j));

  std::vector<double>& x = field.values;
  x.assign(size, 0.0);
  r = b;
  p = r;
  const double bnorm = std::sqrt(dot(b, b));
  double rr = dot(r, r);
  if (bnorm == 0.0) return;
  long it = 0;
  while (std::sqrt(rr) > opt.tol * bnorm) {
    if (it >= opt.max_iterations)
      throw Error(ErrorCode::IterationLimitExceeded,
                  "CG stopped at relative residual " + std::to_string(std::sqrt(rr) / bnorm));
    A.apply(p, Ap);
    const double alpha = rr / dot(p, Ap);
    for (std::size_t k = 0; k < size; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    const double rr_new = dot(r, r);
    const double beta_cg = rr_new / rr;
    for (std::size_t k = 0; k < size; ++k) p[k] = r[k] + beta_cg * p[k];
    rr = rr_new;
    ++it;
  }
  // Report the true residual rather than the recursively updated one.
  A.apply(x, Ap);
  for (std::size_t k = 0; k < size; ++k) r[k] = b[k] - Ap[k];
  field.residual = std::sqrt(dot(r, r)) / bnorm;
  field.iterations = it;
}

// DCT-I diagonalises the mirror-ghost second difference exactly.
void solve_spectral(ParityField2D& field) {
  const int n = field.n;
  const int N = n + 1;
  std::vector<double>& w = field.values;
  w.assign(static_cast<std::size_t>(N) * N, 0.0);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) w[static_cast<std::size_t>(i) * N + j] = forcing_value(field.forcing, i, j);

  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd = fftw_plan_r2r_2d(N, N, w.data(), w.data(), FFTW_REDFT00, FFTW_REDFT00, FFTW_ESTIMATE);
    bwd = fftw_plan_r2r_2d(N, N, w.data(), w.data(), FFTW_REDFT00, FFTW_REDFT00, FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  const double h2 = field.h * field.h;
  std::vector<double> lam(N);
  for (int k = 0; k <= n; ++k) lam[k] = (2.0 * std::cos(std::numbers::pi * k / n) - 2.0) / h2;
  const double norm = 1.0 / (4.0 * n * static_cast<double>(n));
  const double fb = 4.0 * field.beta;
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) w[static_cast<std::size_t>(k) * N + l] *= norm * fb / (lam[k] + lam[l] - fb);
  fftw_execute(bwd);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }

  // Residual of the unweighted equation, for parity with the CG report.
  const NeumannOperator A(n, field.h, field.beta);
  std::vector<double> Aw(w.size());
  A.apply(w, Aw);
  double rr = 0.0, bb = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double c = A.weight(i) * A.weight(j);
      const double bij = -c * fb * forcing_value(field.forcing, i, j);
      const double d = bij - Aw[static_cast<std::size_t>(i) * N + j];
      rr += d * d;
      bb += bij * bij;
    }
  field.residual = bb > 0.0 ? std::sqrt(rr / bb) : 0.0;
  field.iterations = 0;
}

// Least-squares slope a1 of y = a1 x + ... + a_d x^d (normal equations on
// scaled abscissae; d is small).
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
  const double scale = xs.back();
  const int d = degree;
  std::vector<double> M(static_cast<std::size_t>(d) * d, 0.0), rhs(d, 0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::vector<double> phi(d);
    const double s = xs[k] / scale;
    double pw = s;
    for (int a = 0; a < d; ++a, pw *= s) phi[a] = pw;
    for (int a = 0; a < d; ++a) {
      rhs[a] += phi[a] * ys[k];
      for (int b = 0; b < d; ++b) M[a * d + b] += phi[a] * phi[b];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(M[r * d + c]) > std::abs(M[piv * d + c])) piv = r;
    if (M[piv * d + c] == 0.0) throw Error(ErrorCode::SingularSystem, "polynomial fit is singular");
    if (piv != c) {
      for (int b = 0; b < d; ++b) std::swap(M[c * d + b], M[piv * d + b]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (int r = c + 1; r < d; ++r) {
      const double f = M[r * d + c] / M[c * d + c];
      for (int b = c; b < d; ++b) M[r * d + b] -= f * M[c * d + b];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> sol(d);
  for (int r = d - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int b = r + 1; b < d; ++b) s -= M[r * d + b] * sol[b];
    sol[r] = s / M[r * d + r];
  }
  return sol[0] / scale;
}

}  // namespace

ParityField1D solve_parity_1d(const ModelParams& params, int n) {
  const ModelParams p = validate(params);
  if (n < 8) throw Error(ErrorCode::GridTooCoarse, "solve_parity_1d needs n >= 8");
  ParityField1D f;
  f.L = p.L;
  f.beta = p.beta;
  f.n = n;
  f.h = p.L / n;
  f.values = thomas_parity(2.0 * p.beta, f.h, n);
  return f;
}

ParityField2D solve_parity_2d_box(double beta, double side, int n, const Solve2DOptions& options) {
  validate({beta, side, Boundary::Absorbing});
  if (n < 32) throw Error(ErrorCode::GridTooCoarse, "solve_parity_2d needs n >= 32");
  ParityField2D f;
  f.side = side;
  f.beta = beta;
  f.n = n;
  f.h = side / n;
  f.forcing = options.forcing;
  if (options.solver == Solver2D::Spectral)
    solve_spectral(f);
  else
    solve_cg(f, options);
  return f;
}

ParityField2D solve_parity_2d(const ModelParams& params, int n, const Solve2DOptions& options) {
  const ModelParams p = validate(params);
  return solve_parity_2d_box(p.beta, p.L, n, options);
}

DensityProfile density_from_parity(const ParityField1D& field) {
  if (field.n < 2 || field.values.size() < 3) throw Error(ErrorCode::GridTooCoarse, "need at least 3 nodes");
  DensityProfile out;
  out.mode = Boundary::Reflecting;
  out.region = Region::Inside;
  out.points.push_back({0.0, one_sided_rho(field.values, field.h), 0.0});
  return out;
}

DensityProfile density_from_parity(const ParityField2D& field) {
  const int n = field.n;
  if (n < 4) throw Error(ErrorCode::GridTooCoarse, "need at least 4 intervals");
  if (field.forcing != Forcing::Sign)
    throw Error(ErrorCode::InvalidArgument, "density needs the sign-forced field");
  DensityProfile out;
  out.mode = Boundary::Absorbing;
  out.region = Region::Inside;
  std::vector<double> rho(n + 1, 0.0);
  for (int i = 1; i <= n - 2; ++i) rho[i] = diagonal_rho(field, i);
  rho[n - 1] = rho[1];
  for (int i = 0; i <= n; ++i) out.points.push_back({i * field.h, rho[i], 0.0});
  return out;
}

ForceResult force_reflecting_pde(const ModelParams& params, int n) {
  const ModelParams p = validate(params);
  if (n < 8) throw Error(ErrorCode::GridTooCoarse, "force_reflecting_pde needs n >= 8");
  // The wide interval is long enough that tanh(s/2) = 1 to double precision.
  const double k = std::sqrt(2.0 * p.beta);
  const int wide_factor = static_cast<int>(std::ceil((p.L + 40.0 / k) / p.L));
  double F[2];
  for (int level = 0; level < 2; ++level) {
    const int m = n << level;
    const ParityField1D in = solve_parity_1d(p, m);
    const ParityField1D out = solve_parity_1d({p.beta, p.L * wide_factor, p.boundary}, m * wide_factor);
    F[level] = density_from_parity(out).points[0].rho - density_from_parity(in).points[0].rho;
  }
  const double value = (4.0 * F[1] - F[0]) / 3.0;
  return {value, Boundary::Reflecting, Method::PdeOracle, std::abs(value - F[1])};
}

ForceResult force_absorbing_pde(const ModelParams& params, const PdeForceOptions& opt) {
  const ModelParams p = validate(params);
  if (opt.base_divisions < 16 || opt.fit_degree < 2) throw Error(ErrorCode::InvalidArgument, "bad PDE force options");
  const double ell = std::min(p.L, 1.0 / std::sqrt(p.beta));
  const int nL = std::max(32, static_cast<int>(std::lround(p.L / (ell / opt.base_divisions))));
  const double h0 = p.L / nL;
  const int nW = static_cast<int>(std::ceil((p.L + opt.box_margin / std::sqrt(p.beta)) / h0));
  const double x_fit = opt.fit_fraction * ell;

  double F[2];
  for (int level = 0; level < 2; ++level) {
    const int mL = nL << level, mW = nW << level;
    const double h = h0 / (1 << level);
    Solve2DOptions so;
    so.solver = Solver2D::Spectral;
    const ParityField2D in = solve_parity_2d_box(p.beta, p.L, mL, so);
    const ParityField2D wide = solve_parity_2d_box(p.beta, mW * h, mW, so);
    std::vector<double> xs, ys;
    // Node 0 included: the difference vanishes there up to O(h^2).
    for (int i = 0; i <= mL - 2 && i * h <= x_fit * (1.0 + 1e-12); ++i) {
      xs.push_back(i * h);
      ys.push_back(diagonal_rho(in, i) - diagonal_rho(wide, i));
    }
    if (static_cast<int>(xs.size()) < opt.fit_degree + 2) throw Error(ErrorCode::GridTooCoarse, "too few fit nodes");
    F[level] = -fit_slope(xs, ys, opt.fit_degree);
  }
  const double value = (4.0 * F[1] - F[0]) / 3.0;
  return {value, Boundary::Absorbing, Method::PdeOracle, std::abs(value - F[1])};
}

}  // namespace casimir
