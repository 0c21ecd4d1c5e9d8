#include "casimir/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/special_fn.hpp"

namespace casimir {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kMaxRows = 50'000'000;
// Inside this distance from a wall (relative to L) the density comes from
// integrating the flux rather than from the row sum.
constexpr double kWallLayer = 1e-4;

// Force and flux integrals can be far below any fixed absolute tolerance.
constexpr double kTinyAbs = 1e-300;
constexpr double kForceRelTol = 1e-12;
constexpr double kFluxRelTol = 1e-13;

// sinh(a) / sinh(c) for 0 <= a <= c without overflow.
double sinh_ratio(double a, double c) {
  if (c == 0.0) return 1.0;
  return std::exp(a - c) * (-std::expm1(-2.0 * a)) / (-std::expm1(-2.0 * c));
}

void require_mode(const ModelParams& p, Boundary b, const char* what) {
  if (p.boundary != b)
    throw Error(ErrorCode::WrongMode, std::string(what) + " requires " + std::string(to_string(b)) + " walls");
}

void require_inside(const ModelParams& p, double x) {
  if (!(x > 0.0 && x < p.L))
    throw Error(ErrorCode::OutOfDomain, "x = " + std::to_string(x) + " not in (0, L)");
}

void require_negative(double x) {
  if (!(x < 0.0)) throw Error(ErrorCode::OutOfDomain, "x = " + std::to_string(x) + " must be negative");
}

}  // namespace

// ---------------------------------------------------------------------------

FourierCoefficients::FourierCoefficients(double L, double beta, int N)
    : L_(L), beta_(beta), N_(N), table_(static_cast<std::size_t>(N + 1) * (N + 1), 0.0) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "Fourier truncation must be >= 1");
  const double g = 4.0 * beta * L * L;
  const double pi2 = kPi * kPi;
  for (int m = 0; m <= N; ++m) {
    for (int n = 0; n <= N; ++n) {
      if (m == n) continue;
      // Only odd m + n survive: 1 - cos((m+n) pi) is 0 or 2.
      if (((m + n) & 1) == 0) continue;
      double a;
      if (n == 0) {
        const double mm = static_cast<double>(m) * m;
        a = -16.0 * beta * L * L * 2.0 / (mm * pi2 * (mm * pi2 + g));
      } else if (m == 0) {
        const double nn = static_cast<double>(n) * n;
        a = 16.0 * beta * L * L * 2.0 / (nn * pi2 * (nn * pi2 + g));
      } else {
        const double mm = static_cast<double>(m) * m, nn = static_cast<double>(n) * n;
        a = 32.0 * beta * L * L * 2.0 / ((nn - mm) * pi2 * ((mm + nn) * pi2 + g));
      }
      table_[static_cast<std::size_t>(m) * (N + 1) + n] = a;
    }
  }
}

double FourierCoefficients::parity(double x, double y) const {
  std::vector<double> cy(N_ + 1);
  for (int n = 0; n <= N_; ++n) cy[n] = std::cos(n * kPi * y / L_);
  double sum = 0.0;
  for (int m = 0; m <= N_; ++m) {
    double row = 0.0;
    const double* a = &table_[static_cast<std::size_t>(m) * (N_ + 1)];
    for (int n = 0; n <= N_; ++n) row += a[n] * cy[n];
    sum += row * std::cos(m * kPi * x / L_);
  }
  return 1.0 + sum;
}

FourierCoefficients fourier_coefficients(const ModelParams& params, int N) {
  const ModelParams p = validate(params);
  return FourierCoefficients(p.L, p.beta, N);
}

// ---- reflecting ------------------------------------------------------------

ForceResult force_reflecting(const ModelParams& params) {
  const ModelParams p = validate(params);
  require_mode(p, Boundary::Reflecting, "force_reflecting");
  // (1 - e^{-s}) / sinh s == 2 e^{-s} / (1 + e^{-s}).
  const double s = p.L * std::sqrt(2.0 * p.beta);
  const double e = std::exp(-s);
  return {std::sqrt(2.0 * p.beta) * e / (1.0 + e), Boundary::Reflecting, Method::ClosedForm, std::nullopt};
}

double rho_reflecting_inside(const ModelParams& params) {
  const ModelParams p = validate(params);
  // (cosh s - 1) / sinh s == tanh(s/2).
  return std::sqrt(p.beta / 2.0) * std::tanh(p.L * std::sqrt(2.0 * p.beta) / 2.0);
}

double rho_reflecting_outside(const ModelParams& params) {
  const ModelParams p = validate(params);
  return std::sqrt(p.beta / 2.0);
}

double parity_reflecting(const ModelParams& params, double x) {
  const ModelParams p = validate(params);
  require_inside(p, x);
  const double k = std::sqrt(2.0 * p.beta);
  return sinh_ratio(k * x, k * p.L) + sinh_ratio(k * (p.L - x), k * p.L);
}

// ---- absorbing, outside ----------------------------------------------------

double density_outside_absorbing(const ModelParams& params, double x) {
  const ModelParams p = validate(params);
  require_negative(x);
  const double b = p.beta;
  IntegralSpec spec;
  spec.integrand = [b, x](double u) {
    return -2.0 * b * std::exp(-4.0 * b * u) / std::sqrt(2.0 * kPi * u) * casimir::erf(x / std::sqrt(2.0 * u));
  };
  spec.split_point = std::min(x * x, 1.0 / (4.0 * b));
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-13;
  return integrate_halfline(spec).value;
}

double parity_outside_absorbing(const ModelParams& params, double x, double y) {
  const ModelParams p = validate(params);
  if (!(x < y && y < 0.0))
    throw Error(ErrorCode::OutOfDomain, "parity_outside_absorbing requires x < y < 0");
  const double b = p.beta;
  IntegralSpec spec;
  spec.integrand = [b, x, y](double u) {
    const double c = 2.0 * std::sqrt(2.0 * u);
    return 4.0 * b * std::exp(-4.0 * b * u) * casimir::erf((x + y) / c) * casimir::erf((y - x) / c);
  };
  spec.split_point = std::min((y - x) * (y - x), 1.0 / (4.0 * b));
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-13;
  return 1.0 + integrate_halfline(spec).value;
}

double flux_outside(const ModelParams& params, double x) {
  const ModelParams p = validate(params);
  require_negative(x);
  const double b = p.beta;
  IntegralSpec spec;
  spec.integrand = [b, x](double u) {
    return 2.0 * b / (kPi * u) * std::exp(-x * x / (2.0 * u) - 4.0 * b * u);
  };
  spec.split_point = std::abs(x) / std::sqrt(8.0 * b);
  spec.abs_tol = kTinyAbs;
  spec.rel_tol = kFluxRelTol;
  return integrate_halfline(spec).value;
}

// ---- absorbing, inside -----------------------------------------------------

SeriesValue density_inside_absorbing(const ModelParams& params, double x, double tol) {
  const ModelParams p = validate(params);
  require_inside(p, x);
  const double b = p.beta, L = p.L;
  const double d = std::min(x, L - x);
  if (d < kWallLayer * L) {
    // Rows need ~L/d terms here. rho_in(d) = rho_out(-d) - int_0^d G with
    // G(s) = J_out(-s) - J_in(s) smooth and even, so Gauss-Legendre suffices.
    auto G = [&](double u) { return flux_outside(p, -u) - flux_inside(p, u); };
    const double h = 0.5 * d, r = std::sqrt(0.6);
    const double g3 = h * (5.0 * G(h * (1.0 - r)) + 8.0 * G(h) + 5.0 * G(h * (1.0 + r))) / 9.0;
    const double g2 = h * (G(h * (1.0 - 1.0 / std::sqrt(3.0))) + G(h * (1.0 + 1.0 / std::sqrt(3.0))));
    return {density_outside_absorbing(p, -d) - g3, std::abs(g3 - g2), 5};
  }
  const double s = L * std::sqrt(2.0 * b);
  const double t = x / L;

  // Solution of the m = 0 y-ODE particular part, written without overflow.
  const double coth_s = 1.0 / std::tanh(s);
  const double ch = (std::exp(-2.0 * s * t) + std::exp(-2.0 * s * (1.0 - t))) / (-std::expm1(-2.0 * s));
  double sum = std::sqrt(b / 2.0) * (coth_s + ch);

  const double g = 1.0 - std::exp(-2.0 * kPi);
  double tail = 0.0;
  long m = 0;
  for (;; ++m) {
    if (m > kMaxRows) throw Error(ErrorCode::NonConvergence, "density row sum did not converge");
    const double k = m * kPi / L;
    const double kap = std::sqrt(k * k + 4.0 * b);
    const double w = (m == 0) ? 0.5 : 1.0;
    const double sign = (m & 1) ? -1.0 : 1.0;
    const double amp = w * (4.0 * b / L) / (k * k + 2.0 * b);
    sum -= amp * (sign * sinh_ratio(kap * x, kap * L) + sinh_ratio(kap * (L - x), kap * L)) * std::cos(k * x);
    if (m >= 1) {
      const double M1 = static_cast<double>(m + 1);
      const double q = std::exp(-kPi * d / L);
      tail = 8.0 * b * L / (kPi * kPi * M1 * M1 * g) * std::pow(q, M1) / (1.0 - q);
      if (tail < tol) break;
    }
  }
  return {sum, tail, m + 1};
}

SeriesValue density_inside_absorbing_partial(const ModelParams& params, double x, int N) {
  const ModelParams p = validate(params);
  require_inside(p, x);
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "truncation N must be >= 1");
  // rho = -1/2 dV/dy on the diagonal, term by term.
  const FourierCoefficients a(p.L, p.beta, N);
  const double th = kPi * x / p.L;
  double sum = 0.0;
  for (int m = 0; m <= N; ++m) {
    double row = 0.0;
    for (int n = 1; n <= N; ++n) row += a(m, n) * n * std::sin(n * th);
    sum += row * std::cos(m * th);
  }
  sum *= kPi / (2.0 * p.L);
  const double exact = density_inside_absorbing(p, x).value;
  return {sum, std::abs(exact - sum), static_cast<long>(N) * (N + 1)};
}

SeriesValue flux_inside_series(const ModelParams& params, double x, double tol) {
  const ModelParams p = validate(params);
  require_inside(p, x);
  const double t = x / p.L;
  const double g4 = 4.0 * p.beta * p.L * p.L;
  const double d = std::min(t, 1.0 - t);
  const double g = 1.0 - std::exp(-2.0 * kPi);
  double sum = 0.0, tail = 0.0;
  long m = 0;
  for (;; ++m) {
    if (m > kMaxRows) throw Error(ErrorCode::NonConvergence, "flux row sum did not converge");
    const double c = std::sqrt(m * m * kPi * kPi + g4);
    const double sign = (m & 1) ? -1.0 : 1.0;
    // cosh(c(1-t)) / sinh c and cosh(c t) / sinh c in decaying form.
    const double a = (std::exp(-c * t) + std::exp(-c * (2.0 - t)));
    const double bb = (std::exp(-c * (1.0 - t)) + std::exp(-c * (1.0 + t)));
    const double term = std::cos(m * kPi * t) / c * (a - sign * bb) / (-std::expm1(-2.0 * c));
    sum += (m == 0) ? term : 2.0 * term;
    if (m >= 1) {
      const double M1 = static_cast<double>(m + 1);
      const double q = std::exp(-kPi * d);
      tail = 2.0 * p.beta * 8.0 / (M1 * kPi * g) * std::pow(q, M1) / (1.0 - q);
      if (tail < tol) break;
    }
  }
  return {2.0 * p.beta * sum, tail, m + 1};
}

double flux_inside(const ModelParams& params, double x) {
  const ModelParams p = validate(params);
  require_inside(p, x);
  const double t = x / p.L;
  const double a = 4.0 * p.beta * p.L * p.L;
  IntegralSpec spec;
  spec.integrand = [a, t](double u) {
    const double ta = theta_imag(0.5 * t, kPi * u);
    const double tb = theta_imag(0.5 * t + 0.5, kPi * u);
    return std::exp(-a * u) * (ta - tb) * (ta + tb);
  };
  // Geometric mean of the heat-kernel scale d^2/2 and the decay scale 1/a.
  const double d = std::min(t, 1.0 - t);
  spec.split_point = d * std::sqrt(0.5 / a);
  spec.abs_tol = kTinyAbs;
  spec.rel_tol = kFluxRelTol;
  return 2.0 * p.beta * integrate_halfline(spec).value;
}

// ---- absorbing force -------------------------------------------------------

ForceResult force_absorbing(const ModelParams& params) {
  const ModelParams p = validate(params);
  require_mode(p, Boundary::Absorbing, "force_absorbing");
  const double a = 4.0 * p.beta * p.L * p.L;

  IntegralSpec s1;
  s1.integrand = [a](double y) {
    const double tm1 = theta_imag_minus_one(0.0, 1.0 / (kPi * y));
    return -std::exp(-a * y) / y * tm1 * (tm1 + 2.0);
  };
  s1.split_point = 1.0 / std::sqrt(a);
  s1.abs_tol = kTinyAbs;
  s1.rel_tol = kForceRelTol;

  IntegralSpec s2;
  s2.integrand = [a](double y) {
    const double th = theta_imag(0.5, kPi * y);
    return std::exp(-a * y) * th * th;
  };
  s2.split_point = 1.0 / std::sqrt(2.0 * a);
  s2.abs_tol = kTinyAbs;
  s2.rel_tol = kForceRelTol;

  const IntegralResult r1 = integrate_halfline(s1);
  const IntegralResult r2 = integrate_halfline(s2);
  const double c1 = 2.0 * p.beta / kPi, c2 = 2.0 * p.beta;
  return {c1 * r1.value + c2 * r2.value, Boundary::Absorbing, Method::ClosedForm,
          c1 * r1.error_estimate + c2 * r2.error_estimate};
}

ForceResult force_absorbing_flux_limit(const ModelParams& params) {
  const ModelParams p = validate(params);
  require_mode(p, Boundary::Absorbing, "force_absorbing_flux_limit");
  const double x0 = 0.05 * std::min(p.L, 1.0 / std::sqrt(p.beta));
  double g[3];
  for (int k = 0; k < 3; ++k) {
    const double x = x0 / static_cast<double>(1 << k);
    g[k] = flux_outside(p, -x) - flux_inside(p, x);
  }
  // The residual is even and analytic in x: eliminate x^2, then x^4.
  const double r0 = (4.0 * g[1] - g[0]) / 3.0;
  const double r1 = (4.0 * g[2] - g[1]) / 3.0;
  const double value = (16.0 * r1 - r0) / 15.0;
  return {value, Boundary::Absorbing, Method::FluxLimit, std::abs(value - r1)};
}

// ---- profiles --------------------------------------------------------------

DensityProfile density_profile(const ModelParams& params, Region region, const std::vector<double>& xs) {
  const ModelParams p = validate(params);
  DensityProfile out;
  out.mode = p.boundary;
  out.region = region;
  out.points.reserve(xs.size());
  for (double x : xs) {
    double rho;
    if (region == Region::Outside) {
      if (!(x <= 0.0)) throw Error(ErrorCode::OutOfDomain, "outside profile needs x <= 0");
      if (p.boundary == Boundary::Reflecting)
        rho = rho_reflecting_outside(p);
      else
        rho = (x == 0.0) ? 0.0 : density_outside_absorbing(p, x);
    } else {
      if (!(x >= 0.0 && x <= p.L)) throw Error(ErrorCode::OutOfDomain, "inside profile needs 0 <= x <= L");
      if (p.boundary == Boundary::Reflecting) {
        // V(x, y) = V(y - x) solves the two-point problem, so the density is flat.
        rho = rho_reflecting_inside(p);
      } else {
        rho = (x == 0.0 || x == p.L) ? 0.0 : density_inside_absorbing(p, x).value;
      }
    }
    out.points.push_back({x, rho, 0.0});
  }
  return out;
}

FluxProfile flux_profile(const ModelParams& params, const std::vector<double>& xs) {
  const ModelParams p = validate(params);
  FluxProfile out;
  out.mode = p.boundary;
  out.points.reserve(xs.size());
  for (double x : xs) {
    double J;
    if (p.boundary == Boundary::Reflecting) {
      if (x == 0.0 || x == p.L || x > p.L) throw Error(ErrorCode::OutOfDomain, "flux profile needs x < 0 or 0 < x < L");
      J = 0.0;
    } else if (x < 0.0) {
      J = flux_outside(p, x);
    } else {
      J = flux_inside(p, x);
    }
    out.points.push_back({x, J});
  }
  return out;
}

}  // namespace casimir
