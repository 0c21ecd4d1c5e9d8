#include "casimir/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "casimir/error.hpp"

namespace casimir {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Neumaier compensated accumulator, applied to both components.
class ComplexSum {
 public:
  void add(cplx v) {
    add_part(re_, re_c_, v.real());
    add_part(im_, im_c_, v.imag());
  }
  cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

void require_upper_half_plane(cplx tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
    throw Error(ErrorCode::TauNotInUpperHalfPlane, "theta requires Im(tau) > 0");
}

// exp(i pi (n^2 tau + 2 n z)) divided by exp(log_scale).
cplx term(long n, cplx z, cplx tau, double log_scale) {
  const double dn = static_cast<double>(n);
  return std::exp(kI * kPi * (dn * dn * tau + 2.0 * dn * z) - log_scale);
}

// Series scaled by its largest term: the true sum is exp(log_scale) * sum.
struct ScaledSum {
  cplx sum;
  double log_scale = 0.0;
};

// Sums the series outward from the largest term. Each side stops once the
// geometric bound on the remaining tail drops below the threshold. Terms
// with n == 0 are skipped when skip_zero is set.
ScaledSum direct_series(cplx z, cplx tau, double tol, bool skip_zero) {
  const double im_tau = tau.imag();
  const double centre_real = -z.imag() / im_tau;
  if (!std::isfinite(centre_real) || std::abs(centre_real) > 1e15)
    throw Error(ErrorCode::NonConvergence, "theta series centre out of range");
  const long centre = std::lround(centre_real);
  const double dc = static_cast<double>(centre);
  const double log_scale = (kI * kPi * (dc * dc * tau + 2.0 * dc * z)).real();
  // Absolute tolerance on the unscaled sum, expressed in scaled units.
  const double abs_floor = std::exp(std::min(-log_scale, 700.0));

  ComplexSum sum;
  long used = 0;
  if (!(skip_zero && centre == 0)) {
    sum.add(term(centre, z, tau, log_scale));
    ++used;
  }
  for (int dir : {+1, -1}) {
    double prev_mag = 1.0;
    for (long k = 1;; ++k) {
      if (++used > kThetaMaxTerms)
        throw Error(ErrorCode::NonConvergence, "theta series exceeded term cap");
      const long n = centre + dir * k;
      const cplx t = term(n, z, tau, log_scale);
      if (!(skip_zero && n == 0)) sum.add(t);
      const double mag = std::abs(t);
      // |t_{n+1} / t_n| for the next step outward
      const double dn = static_cast<double>(n);
      const double log_ratio = -kPi * im_tau * (2.0 * dir * dn + 1.0) - 2.0 * kPi * dir * z.imag();
      const double ratio = std::exp(log_ratio);
      const double scale = std::max(abs_floor, std::abs(sum.value()));
      if (ratio < 1.0 && mag * ratio / (1.0 - ratio) < 0.25 * tol * scale && mag <= prev_mag) break;
      if (mag == 0.0 && ratio < 1.0) break;
      prev_mag = mag;
    }
  }
  return {sum.value(), log_scale};
}

// prefactor * exp(log_pref) * series, combining exponents before exponentiating.
cplx combine(cplx log_pref, const ScaledSum& s) {
  if (s.sum == cplx(0.0, 0.0)) return 0.0;
  return std::exp(log_pref + s.log_scale) * s.sum;
}

struct Reduced {
  cplx z;
  cplx tau;
  cplx log_prefactor{0.0, 0.0};
  bool transformed = false;
};

cplx log_modular_prefactor(cplx z, cplx tau) {
  return -0.5 * std::log(-kI * tau) - kI * kPi * z * z / tau;
}

// Shift Re(tau) to [-1/2, 1/2] and invert until the nome is small.
Reduced reduce(cplx z, cplx tau) {
  Reduced r{z, tau};
  for (int iter = 0; iter < 64; ++iter) {
    const double k = std::round(r.tau.real());
    if (k != 0.0) {
      // exp(i pi n^2 k) == exp(i pi n k): shift z by k/2
      r.tau -= k;
      r.z += 0.5 * k;
    }
    if (r.tau.imag() >= 1.0 || std::abs(r.tau) >= 1.0) break;
    r.log_prefactor += log_modular_prefactor(r.z, r.tau);
    const cplx tau = r.tau;
    r.z = r.z / tau;
    r.tau = -1.0 / tau;
    r.transformed = true;
  }
  return r;
}

}  // namespace

ModularImage theta_modular(const ThetaArgument& arg) {
  require_upper_half_plane(arg.tau);
  const cplx tau = arg.tau;
  return {{arg.z / tau, -1.0 / tau, arg.branch}, std::exp(log_modular_prefactor(arg.z, tau))};
}

cplx theta(const ThetaArgument& arg, double tol) {
  require_upper_half_plane(arg.tau);
  switch (arg.branch) {
    case ThetaBranch::DirectSeries:
      return combine(0.0, direct_series(arg.z, arg.tau, tol, false));
    case ThetaBranch::ModularTransform:
      return combine(log_modular_prefactor(arg.z, arg.tau),
                     direct_series(arg.z / arg.tau, -1.0 / arg.tau, tol, false));
    case ThetaBranch::Auto:
      break;
  }
  const Reduced r = reduce(arg.z, arg.tau);
  return combine(r.log_prefactor, direct_series(r.z, r.tau, tol, false));
}

cplx theta_minus_one(const ThetaArgument& arg, double tol) {
  require_upper_half_plane(arg.tau);
  if (arg.branch == ThetaBranch::DirectSeries) return combine(0.0, direct_series(arg.z, arg.tau, tol, true));
  if (arg.branch == ThetaBranch::ModularTransform) return theta(arg, tol) - 1.0;
  const Reduced r = reduce(arg.z, arg.tau);
  // Without an inversion the n == 0 term is exactly 1.
  if (!r.transformed) return combine(r.log_prefactor, direct_series(r.z, r.tau, tol, true));
  return combine(r.log_prefactor, direct_series(r.z, r.tau, tol, false)) - 1.0;
}

double theta_imag(double z, double t, double tol) {
  return theta({z, {0.0, t}}, tol).real();
}

double theta_imag_minus_one(double z, double t, double tol) {
  return theta_minus_one({z, {0.0, t}}, tol).real();
}

ThetaTailBound theta_tail(double u) {
  if (!(u > 0.0)) throw Error(ErrorCode::OutOfDomain, "theta_tail requires u > 0");
  // n^2 - 4 >= 4 (n - 2) for n >= 2, so R(u) <= q / (1 - q) with q = exp(-4/u).
  const double q = std::exp(-4.0 / u);
  return {u, q / (-std::expm1(-4.0 / u))};
}

double erf(double x) { return std::erf(x); }

}  // namespace casimir
