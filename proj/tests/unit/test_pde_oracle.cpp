#include <doctest.h>

#include <cmath>
#include <vector>

#include "casimir/closed_form.hpp"
#include "casimir/error.hpp"
#include "casimir/pde_oracle.hpp"

using namespace casimir;

namespace {
ModelParams refl(double b, double L) { return {b, L, Boundary::Reflecting}; }
ModelParams absb(double b, double L) { return {b, L, Boundary::Absorbing}; }
}  // namespace

TEST_CASE("1D parity solve matches the closed form at second order") {
  const ModelParams p = refl(1.0, 2.0);
  const ParityField1D a = solve_parity_1d(p, 256);
  const ParityField1D b = solve_parity_1d(p, 512);
  double ea = 0.0, eb = 0.0, er = 0.0;
  for (int j = 1; j < 256; ++j) {
    const double exact = parity_reflecting(p, a.x(j));
    ea = std::max(ea, std::abs(a.values[j] - exact));
    eb = std::max(eb, std::abs(b.values[2 * j] - exact));
    er = std::max(er, std::abs((4.0 * b.values[2 * j] - a.values[j]) / 3.0 - exact));
  }
  CHECK(ea < 1.0 * a.h * a.h);
  CHECK(ea / eb > 3.3);
  CHECK(ea / eb < 4.7);
  CHECK(er < 1e-8);
}

TEST_CASE("1D solve: symmetry, maximum principle, beta -> 0") {
  const ParityField1D f = solve_parity_1d(refl(3.0, 1.5), 1001);
  for (int j = 0; j <= 1001; ++j) {
    CHECK(std::abs(f.values[j] - f.values[1001 - j]) < 1e-13);
    CHECK(f.values[j] >= 0.0);
    CHECK(f.values[j] <= 1.0);
  }
  const ParityField1D g = solve_parity_1d(refl(1e-14, 1.0), 64);
  for (double v : g.values) CHECK(std::abs(v - 1.0) < 1e-12);
  CHECK_THROWS_AS(solve_parity_1d(refl(1, 1), 4), Error);
}

TEST_CASE("reflecting wall density from the 1D field") {
  const ModelParams p = refl(1.0, 1.0);
  const double exact = rho_reflecting_inside(p);
  const double a = density_from_parity(solve_parity_1d(p, 1024)).points[0].rho;
  const double b = density_from_parity(solve_parity_1d(p, 2048)).points[0].rho;
  CHECK(std::abs((4 * b - a) / 3 - exact) < 1e-6 * exact);
  const double ratio = (a - exact) / (b - exact);
  CHECK(ratio > 3.3);
  CHECK(ratio < 4.7);
  const ForceResult F = force_reflecting_pde(p);
  CHECK(F.method == Method::PdeOracle);
  CHECK(std::abs(F.value - force_reflecting(p).value) < 1e-6 * force_reflecting(p).value);
}

TEST_CASE("2D extended problem: diagonal, skew symmetry, Neumann edges") {
  const ParityField2D f = solve_parity_2d(absb(1.0, 1.0), 64);
  CHECK(f.residual < 1e-10);
  for (int i = 0; i <= 64; ++i) {
    CHECK(std::abs(f.parity(i, i) - 1.0) < 1e-9);
    for (int j = 0; j <= 64; j += 7) CHECK(std::abs(f(i, j) + f(j, i)) < 1e-9);
  }
  // One-sided normal derivative on the x = 0 edge, away from the corner.
  auto edge = [](const ParityField2D& g) {
    double m = 0.0;
    for (int j = g.n / 4; j <= 3 * g.n / 4; ++j)
      m = std::max(m, std::abs(-3.0 * g(0, j) + 4.0 * g(1, j) - g(2, j)) / (2.0 * g.h));
    return m;
  };
  const double e64 = edge(f);
  const double e128 = edge(solve_parity_2d(absb(1.0, 1.0), 128));
  // At least second order (the mirror condition is in fact one order better).
  CHECK(e64 < f.h * f.h);
  CHECK(e64 / e128 > 3.3);
}

TEST_CASE("2D constant forcing gives the constant solution -1") {
  Solve2DOptions o;
  o.forcing = Forcing::Unit;
  for (Solver2D s : {Solver2D::ConjugateGradient, Solver2D::Spectral}) {
    o.solver = s;
    const ParityField2D f = solve_parity_2d(absb(2.0, 1.3), 40, o);
    for (double v : f.values) CHECK(std::abs(v + 1.0) < 1e-9);
  }
}

TEST_CASE("2D solve matches the Fourier reconstruction") {
  const ModelParams p = absb(1.0, 1.0);
  const double fourier = fourier_coefficients(p, 1600).parity(0.25, 0.75);
  const ParityField2D a = solve_parity_2d(p, 128);
  const ParityField2D b = solve_parity_2d(p, 256);
  const double va = a.parity(32, 96), vb = b.parity(64, 192);
  CHECK(std::abs((4 * vb - va) / 3 - fourier) < 1e-6);
  const double ratio = (va - fourier) / (vb - fourier);
  CHECK(ratio > 3.3);
  CHECK(ratio < 4.7);
  Solve2DOptions spec;
  spec.solver = Solver2D::Spectral;
  const ParityField2D c = solve_parity_2d(p, 128, spec);
  for (std::size_t k = 0; k < c.values.size(); k += 97) CHECK(std::abs(c.values[k] - a.values[k]) < 1e-8);
}

TEST_CASE("absorbing inside profile from the 2D field") {
  const ModelParams p = absb(1.0, 1.0);
  Solve2DOptions spec;
  spec.solver = Solver2D::Spectral;
  const DensityProfile a = density_from_parity(solve_parity_2d(p, 160, spec));
  const DensityProfile b = density_from_parity(solve_parity_2d(p, 320, spec));
  CHECK(a.points.front().rho == 0.0);
  CHECK(a.points.back().rho == 0.0);
  for (int k = 1; k <= 9; ++k) {
    const double rich = (4.0 * b.points[32 * k].rho - a.points[16 * k].rho) / 3.0;
    CHECK(std::abs(rich - density_inside_absorbing(p, 0.1 * k).value) < 1e-5);
  }
  CHECK_THROWS_AS(solve_parity_2d(p, 16), Error);
}

TEST_CASE("absorbing force from 2D solves alone") {
  const ModelParams p = absb(1.0, 1.0);
  const ForceResult r = force_absorbing_pde(p);
  CHECK(r.method == Method::PdeOracle);
  CHECK(std::abs(r.value - force_absorbing(p).value) < 1e-4 * force_absorbing(p).value);
}
