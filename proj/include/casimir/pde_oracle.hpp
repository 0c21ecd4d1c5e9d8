#pragma once

#include <vector>

#include "casimir/closed_form.hpp"
#include "casimir/model.hpp"

namespace casimir {

/// Node values of V on x_j = j h, j = 0..n, for (V'' - 2 beta V) = 0 on
/// [0, L] with V(0) = V(L) = 1.
struct ParityField1D {
  double L = 0.0;
  double beta = 0.0;
  double h = 0.0;
  int n = 0;
  std::vector<double> values;

  double x(int j) const { return j * h; }
};

enum class Forcing { Sign, Unit };
enum class Solver2D { ConjugateGradient, Spectral };

struct Solve2DOptions {
  Forcing forcing = Forcing::Sign;
  Solver2D solver = Solver2D::ConjugateGradient;
  double tol = 1e-10;
  long max_iterations = 100000;
};

/// Solution W on the (n+1)^2 nodes of [0, side]^2 of
///   (d_xx + d_yy - 4 beta) W = 4 beta f,  Neumann on all edges,
/// with f = sign(y - x) (0 on the diagonal) or f = 1. For the sign forcing
/// W is the skew-symmetric extension of V - 1 and V = 1 + W on x < y.
struct ParityField2D {
  double side = 0.0;
  double beta = 0.0;
  double h = 0.0;
  int n = 0;
  Forcing forcing = Forcing::Sign;
  std::vector<double> values;  // values[i * (n + 1) + j] = W(x_i, y_j)
  double residual = 0.0;       // relative residual of the final iterate
  long iterations = 0;

  double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * (n + 1) + j]; }
  double parity(int i, int j) const { return 1.0 + (*this)(i, j); }
};

/// Central differences with n intervals, tridiagonal elimination. n >= 8.
ParityField1D solve_parity_1d(const ModelParams& params, int n);

/// Five-point Laplacian with mirror ghost nodes on [0, L]^2, n intervals per
/// side (n >= 32). Conjugate gradients run on the symmetrised system; the
/// spectral solver applies the exact discrete inverse via DCT-I.
ParityField2D solve_parity_2d(const ModelParams& params, int n, const Solve2DOptions& options = {});
/// Same operator on [0, side]^2 (side need not equal params.L).
ParityField2D solve_parity_2d_box(double beta, double side, int n, const Solve2DOptions& options = {});

/// rho(0+) = -V'(0)/2 by the one-sided second-order difference. Between
/// reflecting walls V(x, y) = V(y - x), so this value is the whole inside
/// profile; the single returned point sits at x = 0.
DensityProfile density_from_parity(const ParityField1D& field);

/// rho(x_i) = -dW/dy (x_i, x_i+) / 2 at every node, one-sided second order,
/// using x <-> L - x symmetry for the last two nodes. Zero at the walls.
DensityProfile density_from_parity(const ParityField2D& field);

/// rho(0-) - rho(0+) from two 1D solves with equal spacing: the inside on
/// [0, L] and a wide interval standing in for the half-line. Richardson on
/// n and 2n intervals of [0, L].
ForceResult force_reflecting_pde(const ModelParams& params, int n = 4096);

struct PdeForceOptions {
  /// Coarse spacing is min(L, 1/sqrt(beta)) / base_divisions; the fine level halves it.
  int base_divisions = 128;
  /// Reference box side is L + box_margin / sqrt(beta).
  double box_margin = 6.0;
  /// Polynomial fit uses nodes with x <= fit_fraction * min(L, 1/sqrt(beta)).
  double fit_fraction = 0.1;
  int fit_degree = 4;
};

/// Absorbing force from 2D solves only. The inside densities of the square
/// of side L and of a much wider square differ by a function whose slope at
/// the wall is F(wide) - F(L); the log-divergent fluxes cancel in the
/// difference. F(wide) ~ exp(-sqrt(8 beta) wide) is neglected.
ForceResult force_absorbing_pde(const ModelParams& params, const PdeForceOptions& options = {});

}  // namespace casimir
