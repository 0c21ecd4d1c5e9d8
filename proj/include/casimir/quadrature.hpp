#pragma once

#include <functional>

namespace casimir {

inline constexpr double kQuadDefaultAbsTol = 1e-12;
inline constexpr double kQuadDefaultRelTol = 1e-10;
inline constexpr int kQuadMaxLevel = 12;

/// Integrand and tolerances for an integral over (0, inf).
///
/// The half-line is split at split_point; (0, split) uses the tanh-sinh map
/// and (split, inf) the exp-sinh map scaled by split, so put the split near
/// where the integrand peaks (for the force integrands, the saddle).
struct IntegralSpec {
  std::function<double(double)> integrand;
  double split_point = 1.0;
  double abs_tol = kQuadDefaultAbsTol;
  double rel_tol = kQuadDefaultRelTol;
};

struct IntegralResult {
  double value = 0.0;
  /// Change between the last two refinement levels.
  double error_estimate = 0.0;
  int levels = 0;
  long evaluations = 0;
};

/// Double-exponential quadrature on (0, inf). Refines by halving the step
/// until the level-to-level change is within max(abs_tol, rel_tol*|I|).
///
/// Throws Error(ToleranceNotReached) after kQuadMaxLevel levels and
/// Error(NonFiniteIntegrand) as soon as a NaN or infinity is sampled.
IntegralResult integrate_halfline(const IntegralSpec& spec);

/// tanh-sinh quadrature on a finite interval [a, b], same stopping rule.
IntegralResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = kQuadDefaultAbsTol,
                                  double rel_tol = kQuadDefaultRelTol);

/// Modified Bessel function K_0(x), x > 0.
double bessel_k0(double x);

}  // namespace casimir
