#pragma once

#include <optional>
#include <string_view>

namespace casimir {

enum class Boundary { Reflecting, Absorbing };
enum class Method { ClosedForm, PdeOracle, Simulation, FluxLimit };

std::string_view to_string(Boundary b) noexcept;
std::string_view to_string(Method m) noexcept;
Boundary parse_boundary(std::string_view s);

/// Immigration intensity, wall separation and boundary behaviour.
///
/// Plain aggregate; use validate() before handing it to numerics. The
/// momentum transferred per particle is fixed at 1, so forces are in units
/// of density (1/length).
struct ModelParams {
  double beta = 1.0;
  double L = 1.0;
  Boundary boundary = Boundary::Reflecting;

  /// Decay rate of the one-point parity, sqrt(2 beta).
  double kappa_reflecting() const;
  /// Decay rate of the absorbing force, sqrt(8 beta).
  double kappa_absorbing() const;
};

/// Returns p unchanged if beta and L are finite and positive; throws Error
/// (NonPositiveBeta, NonPositiveL, NonFiniteParameter) otherwise.
ModelParams validate(const ModelParams& p);

struct ForceResult {
  double value = 0.0;
  Boundary mode = Boundary::Reflecting;
  Method method = Method::ClosedForm;
  std::optional<double> uncertainty;
};

}  // namespace casimir
