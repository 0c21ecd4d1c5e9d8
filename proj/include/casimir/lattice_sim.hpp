#pragma once

#include <cstdint>
#include <vector>

#include "casimir/closed_form.hpp"
#include "casimir/model.hpp"

namespace casimir {

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

/// Monte Carlo run configuration. Lengths and times are macroscopic; one
/// unit of macroscopic time is eps^-2 units of lattice time.
struct SimParams {
  ModelParams model;
  double eps = 0.05;
  double W_out = 8.0;
  double t_burn = 5.0;
  double t_sample = 50.0;
  int replicas = 32;
  std::uint64_t seed = 1;
  /// Macroscopic time between samples.
  double sample_dt = 0.05;
  /// Extra parity intervals (a, b]; the defaults for the mode are always added.
  std::vector<Interval> parity_intervals;
  /// Worker threads; 0 reads CASIMIR_THREADS, else hardware concurrency.
  int threads = 0;
  /// Hard cap on lattice events per replica (null events included).
  double max_events = 4e10;
};

/// Site occupancies of the outside segment [-W_out, 0] followed by the
/// inside segment [0, L]. Reflecting walls sit midway between sites; with
/// absorbing walls the wall points are killing sites, so the inside has one
/// site fewer.
struct OccupancyLattice {
  Boundary mode = Boundary::Reflecting;
  double eps = 0.0;
  int n_outside = 0;
  int n_inside = 0;
  std::vector<std::uint8_t> sites;
  double clock = 0.0;  // lattice time

  static OccupancyLattice make(Boundary mode, double eps, int cells_outside, int cells_inside);
  double position(int k) const;
  int count() const;
  int count_inside() const;
  /// Number of occupied sites with position in (a, b].
  int count_in(double a, double b) const;
};

struct ParityMeasurement {
  Interval interval;
  double mean = 1.0;
  double se = 0.0;
  double min_sample = 1.0;
  double max_sample = 1.0;
};

/// Per-batch statistics; every reported mean and error derives from these.
struct BatchRecord {
  double rho_wall_outside = 0.0;
  double rho_wall_inside = 0.0;
  double rate_outside = 0.0;  // absorptions per unit time, outer face of the wall at 0
  double rate_inside = 0.0;   // inner faces, averaged over both walls
  double bulk = 0.0;
  std::vector<double> parity;
};

struct ReplicaCounts {
  std::uint64_t events = 0;
  std::uint64_t created = 0;
  std::uint64_t annihilated = 0;
  std::uint64_t absorbed = 0;
  std::int64_t final_count = 0;
};

struct SimMetadata {
  std::uint64_t seed = 0;
  int replicas = 0;
  double eps = 0.0;
  double W_out = 0.0;
  double L = 0.0;
  int sites_outside = 0;
  int sites_inside = 0;
  int sites_per_bin = 0;
  int batches = 0;
  long samples_per_replica = 0;
  std::uint64_t events = 0;
  std::uint64_t created = 0;
  std::uint64_t annihilated = 0;
  std::uint64_t absorbed = 0;
  /// |first half - second half| of the bulk density over its standard error.
  double drift_z = 0.0;
  bool drift_ok = true;
  std::vector<ReplicaCounts> per_replica;
};

struct SimEstimate {
  SimParams params;
  DensityProfile outside;  // points ordered from the wall outward
  DensityProfile inside;   // points ordered from x = 0
  double bulk_density = 0.0;
  double bulk_density_se = 0.0;
  std::vector<ParityMeasurement> parity;
  std::vector<BatchRecord> batches;
  SimMetadata meta;
};

/// Validates and snaps eps and W_out to whole cell counts, then appends the
/// default parity intervals. InvalidGeometry when a segment has fewer than 4
/// cells; InvalidArgument when t_burn < 5 / (2 beta).
SimParams resolve(const SimParams& params);

/// Runs all replicas. Output is a pure function of params (threads only
/// change the schedule).
SimEstimate simulate(const SimParams& params);

/// Parity of one interval, from a dedicated run of params.
ParityMeasurement measure_parity(const SimParams& params, double a, double b);
/// Looks up an interval measured during the run.
const ParityMeasurement& find_parity(const SimEstimate& est, double a, double b);

/// Reflecting: linear extrapolation of the two bins nearest the wall on each
/// side. Absorbing: absorption rate at the outer face minus the inner face.
/// With strict set, a relative error above 50% throws InsufficientStatistics.
ForceResult force_estimator(const SimEstimate& est, Boundary mode, bool strict = true);

/// Number of worker threads for a requested count (0 = environment/default).
int resolve_threads(int requested);

}  // namespace casimir
