#pragma once

#include <vector>

#include "casimir/model.hpp"

namespace casimir {

enum class Region { Outside, Inside };

struct ProfilePoint {
  double x = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
};

struct DensityProfile {
  Boundary mode = Boundary::Reflecting;
  Region region = Region::Inside;
  std::vector<ProfilePoint> points;
};

struct FluxPoint {
  double x = 0.0;
  double J = 0.0;
};

struct FluxProfile {
  Boundary mode = Boundary::Absorbing;
  std::vector<FluxPoint> points;
};

/// Value of a truncated series together with a bound on what was dropped.
struct SeriesValue {
  double value = 0.0;
  double tail = 0.0;
  long terms = 0;
};

/// Neumann cosine coefficients a_{m,n}, 0 <= m,n <= N, of the skew-symmetric
/// extension U = V - 1 of the absorbing inside parity.
class FourierCoefficients {
 public:
  FourierCoefficients(double L, double beta, int N);

  double L() const { return L_; }
  double beta() const { return beta_; }
  int truncation() const { return N_; }
  double operator()(int m, int n) const { return table_[static_cast<std::size_t>(m) * (N_ + 1) + n]; }

  /// 1 + sum a_{m,n} cos(m pi x/L) cos(n pi y/L) over the stored table.
  double parity(double x, double y) const;

 private:
  double L_, beta_;
  int N_;
  std::vector<double> table_;
};

// ---- reflecting walls ------------------------------------------------------

/// sqrt(beta/2) (1 - exp(-s)) / sinh(s), s = L sqrt(2 beta). Throws WrongMode.
ForceResult force_reflecting(const ModelParams& params);
/// rho(0+) = sqrt(beta/2) (cosh s - 1) / sinh s.
double rho_reflecting_inside(const ModelParams& params);
/// rho(0-) = sqrt(beta/2).
double rho_reflecting_outside(const ModelParams& params);
/// Steady-state parity V(x) of (0, x) between reflecting walls, 0 < x < L.
double parity_reflecting(const ModelParams& params, double x);

// ---- absorbing walls -------------------------------------------------------

/// Half-space density rho(x), x < 0, by quadrature.
double density_outside_absorbing(const ModelParams& params, double x);
/// Half-space parity V(x, y), x < y < 0, by quadrature.
double parity_outside_absorbing(const ModelParams& params, double x, double y);

/// Inside density rho(x), 0 < x < L. The cosine series in x is summed with
/// the y-direction solved exactly, which leaves exponentially decaying rows;
/// tail is a rigorous bound on the dropped rows.
SeriesValue density_inside_absorbing(const ModelParams& params, double x, double tol = 1e-14);
/// Literal square truncation 1 <= m, n <= N of the printed single and double
/// series. Converges like 1/N; tail reports the distance to the resummed value.
SeriesValue density_inside_absorbing_partial(const ModelParams& params, double x, int N);

/// Inside flux J(x) = rho'(x), 0 < x < L, from the theta-function integral.
double flux_inside(const ModelParams& params, double x);
/// Same flux from the double Fourier series with the inner index summed in
/// closed form.
SeriesValue flux_inside_series(const ModelParams& params, double x, double tol = 1e-14);
/// Outside flux J(x) = -rho'(x), x < 0, by quadrature.
double flux_outside(const ModelParams& params, double x);

/// Two-integral theta representation. Throws WrongMode.
ForceResult force_absorbing(const ModelParams& params);
/// Richardson limit of flux_outside(-x) - flux_inside(x) at x0, x0/2, x0/4.
ForceResult force_absorbing_flux_limit(const ModelParams& params);

FourierCoefficients fourier_coefficients(const ModelParams& params, int N);

/// Closed-form profiles sampled at xs (x < 0 for Outside, 0 <= x <= L for Inside).
DensityProfile density_profile(const ModelParams& params, Region region, const std::vector<double>& xs);
FluxProfile flux_profile(const ModelParams& params, const std::vector<double>& xs);

}  // namespace casimir
