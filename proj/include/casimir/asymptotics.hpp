#pragma once

#include <vector>

#include "casimir/model.hpp"

namespace casimir {

/// Least-squares fit of log F(L) = a - slope L + p log L over L_grid.
struct AsymptoticFit {
  Boundary mode = Boundary::Reflecting;
  std::vector<double> L_grid;
  double slope = 0.0;
  double prefactor_exponent = 0.0;  // p; fixed unless fitted freely
  double intercept = 0.0;           // a
  double residual = 0.0;            // root-mean-square, log space
  bool free_exponent = false;
  /// F(L) L^-p exp(kappa L) with the theoretical kappa, one per grid point.
  std::vector<double> ratio;
};

/// p is 0 (reflecting) or -1/2 (absorbing) unless free_exponent is set.
/// Requires a strictly increasing grid of at least 4 points, each with
/// L sqrt(2 beta) >= 3 (InvalidArgument). ForceUnderflow if F < 1e-300.
AsymptoticFit fit_decay(Boundary mode, double beta, const std::vector<double>& L_grid, bool free_exponent = false);

struct SaddlePoint {
  double u_c = 0.0;
  double value = 0.0;  // 4 beta u_c + 1 / u_c
};

/// 4 beta u + 1 / u.
double saddle_objective(double beta, double u);
/// Minimiser of saddle_objective on (0, inf): u_c = 1 / sqrt(4 beta).
SaddlePoint saddle_point(double beta);

}  // namespace casimir
