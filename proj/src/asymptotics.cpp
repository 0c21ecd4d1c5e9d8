#include "casimir/asymptotics.hpp"

#include <cmath>

#include "casimir/closed_form.hpp"
#include "casimir/error.hpp"

namespace casimir {
namespace {

// Solves the k x k normal equations by Gaussian elimination with pivoting.
std::vector<double> least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
  const std::size_t k = rows.front().size();
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) a[i][j] += rows[r][i] * rows[r][j];
      a[i][k] += rows[r][i] * y[r];
    }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    if (a[c][c] == 0.0) throw Error(ErrorCode::SingularSystem, "degenerate fit grid");
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = a[i][k] / a[i][i];
  return x;
}

}  // namespace

AsymptoticFit fit_decay(Boundary mode, double beta, const std::vector<double>& L_grid, bool free_exponent) {
  if (L_grid.size() < 4) throw Error(ErrorCode::InvalidArgument, "need at least 4 grid points");
  for (std::size_t i = 0; i < L_grid.size(); ++i) {
    validate(ModelParams{beta, L_grid[i], mode});
    if (i > 0 && !(L_grid[i] > L_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");
    if (L_grid[i] * std::sqrt(2.0 * beta) < 3.0)
      throw Error(ErrorCode::InvalidArgument, "grid point outside the asymptotic regime L sqrt(2 beta) >= 3");
  }

  AsymptoticFit fit;
  fit.mode = mode;
  fit.L_grid = L_grid;
  fit.free_exponent = free_exponent;
  const double p_fixed = mode == Boundary::Reflecting ? 0.0 : -0.5;
  const ModelParams ref{beta, 1.0, mode};
  const double kappa = mode == Boundary::Reflecting ? ref.kappa_reflecting() : ref.kappa_absorbing();

  std::vector<double> logF;
  for (double L : L_grid) {
    const ModelParams p{beta, L, mode};
    const double F = mode == Boundary::Reflecting ? force_reflecting(p).value : force_absorbing(p).value;
    if (!(F >= 1e-300)) throw Error(ErrorCode::ForceUnderflow, "force below 1e-300 at L = " + std::to_string(L));
    logF.push_back(std::log(F));
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (std::size_t i = 0; i < L_grid.size(); ++i) {
    const double L = L_grid[i];
    if (free_exponent) {
      rows.push_back({1.0, -L, std::log(L)});
      y.push_back(logF[i]);
    } else {
      rows.push_back({1.0, -L});
      y.push_back(logF[i] - p_fixed * std::log(L));
    }
  }
  const std::vector<double> c = least_squares(rows, y);
  fit.intercept = c[0];
  fit.slope = c[1];
  fit.prefactor_exponent = free_exponent ? c[2] : p_fixed;

  double ss = 0.0;
  for (std::size_t i = 0; i < L_grid.size(); ++i) {
    double model = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) model += c[j] * rows[i][j];
    ss += (y[i] - model) * (y[i] - model);
  }
  fit.residual = std::sqrt(ss / static_cast<double>(L_grid.size()));

  for (std::size_t i = 0; i < L_grid.size(); ++i)
    fit.ratio.push_back(std::exp(logF[i] + kappa * L_grid[i] - fit.prefactor_exponent * std::log(L_grid[i])));
  return fit;
}

double saddle_objective(double beta, double u) { return 4.0 * beta * u + 1.0 / u; }

SaddlePoint saddle_point(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::NonPositiveBeta, "beta must be positive");
  const double u = 1.0 / std::sqrt(4.0 * beta);
  return {u, saddle_objective(beta, u)};
}

}  // namespace casimir
