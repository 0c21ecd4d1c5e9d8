#include "casimir/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <numbers>
#include <sstream>

#include "casimir/asymptotics.hpp"
#include "casimir/closed_form.hpp"
#include "casimir/error.hpp"
#include "casimir/lattice_sim.hpp"
#include "casimir/pde_oracle.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/special_fn.hpp"

namespace casimir {
namespace {

using cd = std::complex<double>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// pass when |observed - expected| <= tolerance (absolute)
Check abs_check(std::string id, std::string what, double expected, double observed, double tol) {
  return {std::move(id), std::move(what), expected, observed, tol, std::abs(observed - expected) <= tol};
}

// pass when |observed / expected - 1| <= tolerance
Check rel_check(std::string id, std::string what, double expected, double observed, double tol) {
  return {std::move(id), std::move(what), expected, observed, tol, rel(observed, expected) <= tol};
}

std::vector<Check> reflecting_oracle() {
  std::vector<Check> out;
  for (double b : {0.5, 1.0, 2.0})
    for (double L : {0.5, 1.0, 2.0}) {
      const ModelParams p{b, L, Boundary::Reflecting};
      const double cf = force_reflecting(p).value;
      const double ode = force_reflecting_pde(p, 4096).value;
      out.push_back(rel_check("c1.beta=" + fmt(b) + ".L=" + fmt(L),
                              "reflecting force vs 1D ODE oracle, Richardson n=4096/8192", cf, ode, 1e-6));
    }
  return out;
}

std::vector<Check> absorbing_three_way() {
  std::vector<Check> out;
  for (double L : {0.5, 1.0, 2.0}) {
    const ModelParams p{1.0, L, Boundary::Absorbing};
    const double th = force_absorbing(p).value;
    const double fl = force_absorbing_flux_limit(p).value;
    const double pde = force_absorbing_pde(p).value;
    const std::string tag = ".L=" + fmt(L);
    out.push_back(rel_check("c2.theta-vs-fluxlimit" + tag, "absorbing force: theta integral vs flux limit", th, fl, 1e-4));
    out.push_back(rel_check("c2.theta-vs-pde" + tag, "absorbing force: theta integral vs 2D PDE oracle", th, pde, 1e-4));
    out.push_back(rel_check("c2.fluxlimit-vs-pde" + tag, "absorbing force: flux limit vs 2D PDE oracle", fl, pde, 1e-4));
  }
  return out;
}

std::vector<Check> flux_representations() {
  std::vector<Check> out;
  const ModelParams p{1.0, 1.0, Boundary::Absorbing};
  for (int k = 1; k <= 10; ++k) {
    const double x = k / 11.0;
    const double series = flux_inside_series(p, x).value;
    out.push_back(abs_check("c3.x=" + fmt(x), "inside flux: theta integral vs double Fourier series", series,
                            flux_inside(p, x), 1e-8));
  }
  return out;
}

std::vector<Check> exponents() {
  std::vector<Check> out;
  const std::vector<double> rg{3, 4, 5, 6, 7, 8}, ag{4, 5, 6, 7};
  for (double b : {1.0, 2.0}) {
    const std::string tag = ".beta=" + fmt(b);
    const AsymptoticFit r = fit_decay(Boundary::Reflecting, b, rg);
    out.push_back(rel_check("c4.reflecting.kappa" + tag, "fitted decay rate, L in [3, 8], p = 0", std::sqrt(2 * b), r.slope, 0.01));
    const AsymptoticFit a = fit_decay(Boundary::Absorbing, b, ag);
    out.push_back(rel_check("c4.absorbing.kappa" + tag, "fitted decay rate, L in [4, 7], p = -1/2", std::sqrt(8 * b), a.slope, 0.02));
    const AsymptoticFit rf = fit_decay(Boundary::Reflecting, b, rg, true);
    out.push_back(abs_check("c4.reflecting.p" + tag, "free power of L, reflecting", 0.0, rf.prefactor_exponent, 0.1));
    const AsymptoticFit af = fit_decay(Boundary::Absorbing, b, ag, true);
    out.push_back(abs_check("c4.absorbing.p" + tag, "free power of L, absorbing", -0.5, af.prefactor_exponent, 0.1));
  }
  for (double b : {1.0, 0.25}) {
    const SaddlePoint s = saddle_point(b);
    out.push_back(abs_check("saddle.u_c.beta=" + fmt(b), "saddle point 1/sqrt(4 beta)", 1.0 / std::sqrt(4 * b), s.u_c, 1e-15));
    out.push_back(abs_check("saddle.F.beta=" + fmt(b), "saddle value 4 sqrt(beta)", 4 * std::sqrt(b), s.value, 1e-14));
  }
  return out;
}

std::vector<Check> special_functions() {
  std::vector<Check> out;
  double worst = 0.0;
  for (double im_tau : {0.05, 0.2, 1.0, 5.0, 20.0})
    for (double re_tau : {0.0, 0.4})
      for (cd z : {cd(0.0, 0.0), cd(0.3, 0.0), cd(0.5, 0.0), cd(0.25, 0.1), cd(0.1, -0.2)}) {
        const cd tau(re_tau, im_tau);
        const cd d = theta({z, tau, ThetaBranch::DirectSeries});
        const cd m = theta({z, tau, ThetaBranch::ModularTransform});
        worst = std::max(worst, std::abs(d - m) / (1.0 + std::abs(d)));
      }
  out.push_back(abs_check("c5.jacobi", "max modular-identity residual over 50 (z, tau) points", 0.0, worst, 1e-12));
  const double exact = std::pow(std::numbers::pi, 0.25) / std::tgamma(0.75);
  out.push_back(abs_check("c5.theta0i", "theta(0, i) vs pi^(1/4) / Gamma(3/4)", exact, theta({0.0, cd(0.0, 1.0)}).real(), 1e-13));
  for (double b : {0.5, 1.0, 2.0})
    for (double x : {0.1, 0.5, 1.0}) {
      const double k = 4 * b / std::numbers::pi * bessel_k0(2 * x * std::sqrt(2 * b));
      out.push_back(rel_check("c5.bessel.beta=" + fmt(b) + ".x=" + fmt(x),
                              "outside flux vs (4 beta / pi) K0(2 x sqrt(2 beta))", k,
                              flux_outside({b, 1.0, Boundary::Absorbing}, -x), 1e-10));
    }
  return out;
}

std::vector<Check> scaling() {
  std::vector<Check> out;
  for (double L : {0.5, 1.0, 2.0}) {
    const double r = force_reflecting({4.0, L / 2, Boundary::Reflecting}).value /
                     force_reflecting({1.0, L, Boundary::Reflecting}).value;
    out.push_back(abs_check("c8.reflecting.L=" + fmt(L), "F^R(4 beta, L/2) / F^R(beta, L), beta = 1", 4.0, r, 4e-15));
    const double a = force_absorbing({4.0, L / 2, Boundary::Absorbing}).value /
                     force_absorbing({1.0, L, Boundary::Absorbing}).value;
    out.push_back(rel_check("c8.absorbing.L=" + fmt(L), "F^A(4 beta, L/2) / F^A(beta, L), beta = 1", 4.0, a, 1e-8));
  }
  return out;
}

SimParams sim_base(const VerifyOptions& o, double L, double eps) {
  SimParams p;
  p.model = {1.0, L, Boundary::Reflecting};
  p.eps = eps;
  p.W_out = 8.0;
  p.t_burn = 5.0;
  p.t_sample = 50.0;
  p.replicas = 32;
  p.seed = o.seed;
  p.threads = o.threads;
  return p;
}

std::vector<Check> monte_carlo_reflecting(const VerifyOptions& o) {
  std::vector<Check> out;
  const SimParams p = sim_base(o, 2.0, 0.05);
  const SimEstimate e = simulate(p);
  const double bulk = std::sqrt(0.5);
  out.push_back(abs_check("c6.bulk", "bulk density vs sqrt(beta/2), tolerance 3 standard errors", bulk, e.bulk_density,
                          3 * e.bulk_density_se));
  const ParityMeasurement& whole = find_parity(e, 0.0, 2.0);
  Check c = abs_check("c6.parity", "smallest sampled parity of (0, L); must be +1 at every sample", 1.0, whole.min_sample, 0.0);
  c.pass = c.pass && whole.max_sample == 1.0;
  out.push_back(c);
  const ParityMeasurement& half = find_parity(e, 0.0, 1.0);
  out.push_back(abs_check("c6.V(L/2)", "parity of (0, L/2) vs closed form, tolerance 3 sigma + 2 eps",
                          parity_reflecting(p.model, 1.0), half.mean, 3 * half.se + 2 * e.meta.eps));
  return out;
}

std::vector<Check> monte_carlo_trend(const VerifyOptions& o) {
  std::vector<Check> out;
  const ModelParams m{1.0, 1.0, Boundary::Reflecting};
  const double target[2] = {rho_reflecting_outside(m), rho_reflecting_inside(m)};
  const char* side[2] = {"outside", "inside"};
  double prev_d[2] = {0, 0}, prev_s[2] = {0, 0};
  SimEstimate last;
  int k = 0;
  for (double eps : {0.2, 0.1, 0.05}) {
    SimEstimate e = simulate(sim_base(o, 1.0, eps));
    for (int s = 0; s < 2; ++s) {
      // wall value from the same per-batch extrapolation the force uses
      std::vector<double> v;
      for (const BatchRecord& b : e.batches) v.push_back(s == 0 ? b.rho_wall_outside : b.rho_wall_inside);
      double mean = 0, ss = 0;
      for (double x : v) mean += x;
      mean /= v.size();
      for (double x : v) ss += (x - mean) * (x - mean);
      const double se = std::sqrt(ss / (v.size() - 1) / v.size());
      const double d = std::abs(mean - target[s]);
      if (k > 0) {
        const double sigma = std::hypot(se, prev_s[s]);
        out.push_back({"c7.trend." + std::string(side[s]) + ".eps=" + fmt(eps),
                       std::string("|wall density - closed form| at eps vs previous eps, allowing 1 sigma (") + side[s] + ")",
                       prev_d[s], d, sigma, d <= prev_d[s] + sigma});
      }
      prev_d[s] = d;
      prev_s[s] = se;
    }
    last = std::move(e);
    ++k;
  }
  const ForceResult f = force_estimator(last, Boundary::Reflecting, false);
  out.push_back(abs_check("c7.force", "reflecting force estimator at eps = 0.05 vs closed form, tolerance 3 sigma + 2 eps",
                          force_reflecting(m).value, f.value, 3 * f.uncertainty.value_or(0.0) + 2 * last.meta.eps));
  return out;
}

}  // namespace

std::vector<Check> criterion_checks(int criterion, const VerifyOptions& options) {
  switch (criterion) {
    case 1: return reflecting_oracle();
    case 2: return absorbing_three_way();
    case 3: return flux_representations();
    case 4: return exponents();
    case 5: return special_functions();
    case 6: return monte_carlo_reflecting(options);
    case 7: return monte_carlo_trend(options);
    case 8: return scaling();
    default: throw Error(ErrorCode::InvalidArgument, "criterion must be 1..8");
  }
}

VerifyReport run_verify(const std::string& suite, const VerifyOptions& options) {
  std::vector<int> ids;
  if (suite == "all") ids = {1, 2, 3, 4, 5, 6, 7, 8};
  else if (suite == "closed-form") ids = {3, 5, 8};
  else if (suite == "oracle") ids = {1, 2};
  else if (suite == "asymptotics") ids = {4};
  else if (suite == "simulation") ids = {6, 7};
  else throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");

  VerifyReport r;
  r.suite = suite;
  for (int id : ids) {
    std::vector<Check> c = criterion_checks(id, options);
    r.checks.insert(r.checks.end(), c.begin(), c.end());
  }
  r.overall = true;
  for (const Check& c : r.checks) r.overall = r.overall && c.pass;
  r.provenance = {{"version", kVersion}, {"compiler", __VERSION__}, {"cxx_standard", static_cast<long>(__cplusplus)}};
  if (suite == "all" || suite == "simulation") r.provenance["seed"] = options.seed;
  if (options.timestamps) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    r.provenance["timestamp"] = buf;
  }
  return r;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : report.checks)
    checks.push_back({{"id", c.id},
                      {"description", c.description},
                      {"expected", c.expected},
                      {"observed", c.observed},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  return {{"suite", report.suite}, {"overall", report.overall}, {"checks", checks}, {"provenance", report.provenance}};
}

}  // namespace casimir
