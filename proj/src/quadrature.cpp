#include "casimir/quadrature.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/error.hpp"

namespace casimir {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kMinLevel = 3;

// One side of the split. sample(t) returns weight * f(x(t)) or 0 outside
// the representable range; the trapezoid sums over t in [t_lo, t_hi].
template <class Sample>
class Trapezoid {
 public:
  Trapezoid(Sample sample, double t_lo, double t_hi) : sample_(sample), t_lo_(t_lo), t_hi_(t_hi) {}

  // Level 0 uses unit spacing; each further level adds the midpoints.
  double refine(int level) {
    const double h = std::ldexp(1.0, -level);
    double added = 0.0;
    if (level == 0) {
      for (double t = std::ceil(t_lo_); t <= t_hi_; t += 1.0) added += sample_(t);
      sum_ = added;
    } else {
      const long first = static_cast<long>(std::ceil(t_lo_ / h));
      const long last = static_cast<long>(std::floor(t_hi_ / h));
      for (long k = first; k <= last; ++k) {
        if ((k & 1L) == 0) continue;
        added += sample_(static_cast<double>(k) * h);
      }
      sum_ += added;
    }
    return h * sum_;
  }

 private:
  Sample sample_;
  double t_lo_, t_hi_;
  double sum_ = 0.0;
};

double checked(const std::function<double(double)>& f, double x, long& evals) {
  ++evals;
  const double v = f(x);
  if (!std::isfinite(v))
    throw Error(ErrorCode::NonFiniteIntegrand, "integrand not finite at x = " + std::to_string(x));
  return v;
}

}  // namespace

IntegralResult integrate_halfline(const IntegralSpec& spec) {
  const double s = spec.split_point;
  if (!(s > 0.0) || !(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "split_point and tolerances must be positive");
  const auto& f = spec.integrand;
  long evals = 0;

  // (0, s): x = s / (1 + exp(-pi sinh t)), distance to 0 kept exact for t < 0.
  auto left = [&](double t) {
    const double e = std::exp(-2.0 * kHalfPi * std::sinh(t));
    if (!std::isfinite(e)) return 0.0;
    const double x = s / (1.0 + e);
    // Nodes this close to 0 carry no weight for an integrable endpoint.
    if (!(x > s * 1e-200) || !(x < s)) return 0.0;
    const double w = s * 2.0 * kHalfPi * std::cosh(t) * e / ((1.0 + e) * (1.0 + e));
    if (w == 0.0) return 0.0;
    return w * checked(f, x, evals);
  };
  // (s, inf): x = s + s exp(pi/2 sinh t).
  auto right = [&](double t) {
    const double e = std::exp(kHalfPi * std::sinh(t));
    const double x = s + s * e;
    if (!(x > s) || !std::isfinite(x)) return 0.0;
    const double w = s * kHalfPi * std::cosh(t) * e;
    if (w == 0.0) return 0.0;
    const double v = checked(f, x, evals);
    return v == 0.0 ? 0.0 : w * v;
  };

  Trapezoid<decltype(left)> lhs(left, -6.5, 4.0);
  Trapezoid<decltype(right)> rhs(right, -6.5, 5.0);

  double prev = 0.0;
  for (int level = 0; level <= kQuadMaxLevel; ++level) {
    const double value = lhs.refine(level) + rhs.refine(level);
    const double diff = std::abs(value - prev);
    if (level >= kMinLevel && diff <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value)))
      return {value, diff, level, evals};
    prev = value;
  }
  throw Error(ErrorCode::ToleranceNotReached, "integrate_halfline did not converge");
}

IntegralResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol) {
  if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "integrate_interval requires a < b");
  const double half = 0.5 * (b - a);
  long evals = 0;
  // Distance to the nearer endpoint is computed directly to keep it exact.
  auto sample = [&](double t) {
    const double e = std::exp(-2.0 * kHalfPi * std::sinh(std::abs(t)));
    const double d = 2.0 * half * e / (1.0 + e);
    if (!(d > half * 1e-200)) return 0.0;
    const double x = t < 0.0 ? a + d : b - d;
    if (!(x > a) || !(x < b)) return 0.0;
    const double w = half * 2.0 * 2.0 * kHalfPi * std::cosh(t) * e / ((1.0 + e) * (1.0 + e));
    return w * checked(f, x, evals);
  };
  Trapezoid<decltype(sample)> trap(sample, -6.5, 6.5);
  double prev = 0.0;
  for (int level = 0; level <= kQuadMaxLevel; ++level) {
    const double value = trap.refine(level);
    const double diff = std::abs(value - prev);
    if (level >= kMinLevel && diff <= std::max(abs_tol, rel_tol * std::abs(value)))
      return {value, diff, level, evals};
    prev = value;
  }
  throw Error(ErrorCode::ToleranceNotReached, "integrate_interval did not converge");
}

double bessel_k0(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "bessel_k0 requires x > 0");
  return boost::math::cyl_bessel_k(0, x);
}

}  // namespace casimir
