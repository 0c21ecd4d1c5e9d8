#pragma once

#include <complex>

namespace casimir {

enum class ThetaBranch { DirectSeries, ModularTransform, Auto };

/// Argument of the third Jacobi theta function
///   theta(z, tau) = sum_{n in Z} exp(i pi n^2 tau + 2 pi i n z),  Im tau > 0.
struct ThetaArgument {
  std::complex<double> z;
  std::complex<double> tau;
  ThetaBranch branch = ThetaBranch::Auto;
};

/// Result of one application of the Jacobi imaginary transformation:
/// theta(arg) == prefactor * theta(image).
struct ModularImage {
  ThetaArgument image;
  std::complex<double> prefactor;
};

/// Certified upper bound for R(u) = sum_{n>=2} exp(-n^2/u).
struct ThetaTailBound {
  double u = 0.0;
  double bound = 0.0;
};

inline constexpr double kThetaDefaultTol = 1e-16;
inline constexpr int kThetaMaxTerms = 10000;

/// Evaluates theta(z, tau).
///
/// Truncation error is below tol * max(1, |theta|). With ThetaBranch::Auto
/// the argument is first reduced (Re tau into [-1/2, 1/2], shifting z by
/// half periods) and transformed by tau -> -1/tau while Im tau < 1 and
/// |tau| < 1; for purely imaginary tau this always lands on Im tau >= 1.
/// DirectSeries and ModularTransform force one route and are meant for
/// cross-checks.
///
/// Throws Error(TauNotInUpperHalfPlane) or Error(NonConvergence) when more
/// than kThetaMaxTerms terms would be needed.
std::complex<double> theta(const ThetaArgument& arg, double tol = kThetaDefaultTol);

/// theta(arg) - 1 without cancellation when theta is close to 1 (large Im tau).
std::complex<double> theta_minus_one(const ThetaArgument& arg, double tol = kThetaDefaultTol);

/// Real-valued shortcut for theta(z, i t) with real z and t > 0.
double theta_imag(double z, double t, double tol = kThetaDefaultTol);
double theta_imag_minus_one(double z, double t, double tol = kThetaDefaultTol);

/// (z, tau) -> (z/tau, -1/tau) with prefactor (-i tau)^{-1/2} exp(-i pi z^2 / tau).
ModularImage theta_modular(const ThetaArgument& arg);

ThetaTailBound theta_tail(double u);

/// Error function; odd, accurate to a few ulp.
double erf(double x);

}  // namespace casimir
