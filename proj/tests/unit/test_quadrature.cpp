#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"
#include "fixtures/golden.hpp"

using namespace casimir;

TEST_CASE("integral of exp(-u) is 1") {
  const IntegralResult r = integrate_halfline({[](double u) { return std::exp(-u); }});
  CHECK(std::abs(r.value - 1.0) < 1e-12);
}

TEST_CASE("Gamma(1/2) integral with endpoint singularity") {
  IntegralSpec s{[](double u) { return std::exp(-4.0 * u) / std::sqrt(2.0 * std::numbers::pi * u); }, 0.5};
  CHECK(std::abs(integrate_halfline(s).value - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("essential singularity at 0: Bessel integral") {
  IntegralSpec s{[](double u) { return std::exp(-1.0 / u - u) / u; }, 1.0};
  CHECK(std::abs(integrate_halfline(s).value - golden::kTwoK0At2) < 1e-12);
}

TEST_CASE("NaN integrand aborts") {
  IntegralSpec s{[](double u) { return u > 2.0 ? std::numeric_limits<double>::quiet_NaN() : std::exp(-u); }};
  try {
    integrate_halfline(s);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteIntegrand);
  }
}

TEST_CASE("non-integrable integrand does not converge") {
  IntegralSpec s{[](double u) { return 1.0 / (1.0 + u); }, 1.0, 1e-14, 1e-14};
  try {
    integrate_halfline(s);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceNotReached);
  }
}

TEST_CASE("halving tolerances moves the result by less than the error estimate") {
  auto f = [](double u) { return std::exp(-2.0 * u - 0.5 / u) / std::sqrt(u); };
  IntegralSpec a{f, 0.5, 1e-8, 1e-6};
  IntegralSpec b{f, 0.5, 0.5e-8, 0.5e-6};
  const IntegralResult ra = integrate_halfline(a);
  const IntegralResult rb = integrate_halfline(b);
  CHECK(std::abs(ra.value - rb.value) <= std::max(ra.error_estimate, 1e-15));
}

TEST_CASE("finite-interval tanh-sinh") {
  const IntegralResult r = integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 4.0);
  CHECK(std::abs(r.value - 4.0) < 1e-10);
}

TEST_CASE("bessel_k0 fixtures and limits") {
  CHECK(bessel_k0(1.0) == doctest::Approx(golden::kBesselK0At1).epsilon(1e-13));
  CHECK(bessel_k0(20.0) == doctest::Approx(golden::kBesselK0At20).epsilon(1e-12));
  // Leading asymptotic term alone is within the first correction, 1/(8x).
  CHECK(std::abs(bessel_k0(20.0) / (std::sqrt(std::numbers::pi / 40.0) * std::exp(-20.0)) - 1.0) < 1.0 / 160.0);
  const double eg = 0.57721566490153286;
  CHECK(std::abs(bessel_k0(1e-8) + std::log(0.5e-8) + eg) < 1e-12);
  CHECK_THROWS_AS(bessel_k0(0.0), Error);
}
