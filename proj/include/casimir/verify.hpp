#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace casimir {

struct Check {
  std::string id;
  std::string description;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool overall = false;  // every check passed
  nlohmann::json provenance;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  int threads = 0;
  /// Adds wall-clock timestamps to the provenance (breaks byte-identical output).
  bool timestamps = false;
};

inline constexpr const char* kVersion = "1.0.0";

/// Suites: all, closed-form, oracle, asymptotics, simulation. Unknown names
/// throw InvalidArgument.
VerifyReport run_verify(const std::string& suite, const VerifyOptions& options = {});

/// Checks grouped by acceptance criterion 1..8 (9 needs the executable).
std::vector<Check> criterion_checks(int criterion, const VerifyOptions& options = {});

nlohmann::json to_json(const VerifyReport& report);

}  // namespace casimir
