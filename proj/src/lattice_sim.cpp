#include "casimir/lattice_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "casimir/error.hpp"

namespace casimir {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t replica_seed(std::uint64_t seed, int replica) {
  return splitmix64(splitmix64(seed) ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(replica + 1)));
}

// Uniform on [0, 1) and on (0, 1] from the top 53 bits.
inline double unit_closed_open(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
inline double unit_open_closed(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53; }

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  const double n = static_cast<double>(v.size());
  if (v.empty()) return r;
  for (double x : v) r.mean += x;
  r.mean /= n;
  if (v.size() < 2) return r;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / (n - 1.0) / n);
  return r;
}

// Fixed geometry shared by all replicas.
struct Layout {
  Boundary mode;
  double eps;
  int n_out, n_in, n_sites;
  int pairs_out, pairs_in, pairs;
  int spb;  // sites per bin
  int bins_out, bins_in;
  std::vector<int> bin_of;  // -1 for sites outside every bin; outside bins first
  std::vector<int> bin_size;
  std::vector<double> bin_pos;
  int bulk_lo, bulk_hi;     // site index range [lo, hi)
  std::vector<std::pair<int, int>> parity_ranges;  // [lo, hi) site ranges
  std::vector<Interval> intervals;
};

std::pair<int, int> site_range(const OccupancyLattice& lat, double a, double b) {
  int lo = lat.n_outside + lat.n_inside, hi = 0;
  for (int k = 0; k < lat.n_outside + lat.n_inside; ++k) {
    const double x = lat.position(k);
    if (x > a && x <= b) {
      lo = std::min(lo, k);
      hi = std::max(hi, k + 1);
    }
  }
  if (hi <= lo) return {0, 0};
  return {lo, hi};
}

Layout make_layout(const SimParams& p) {
  const OccupancyLattice lat = OccupancyLattice::make(
      p.model.boundary, p.eps, static_cast<int>(std::lround(p.W_out / p.eps)),
      static_cast<int>(std::lround(p.model.L / p.eps)));
  Layout l;
  l.mode = p.model.boundary;
  l.eps = p.eps;
  l.n_out = lat.n_outside;
  l.n_in = lat.n_inside;
  l.n_sites = l.n_out + l.n_in;
  l.pairs_out = l.n_out - 1;
  l.pairs_in = l.n_in - 1;
  l.pairs = l.pairs_out + l.pairs_in;

  const double width = std::max(p.eps, p.model.L / 64.0);
  l.spb = std::max(1, static_cast<int>(std::ceil(width / p.eps - 1e-9)));
  l.bins_out = l.n_out / l.spb;
  l.bins_in = l.n_in / l.spb;
  l.bin_of.assign(l.n_sites, -1);
  l.bin_size.assign(l.bins_out + l.bins_in, 0);
  l.bin_pos.assign(l.bins_out + l.bins_in, 0.0);
  // Bins are counted from the wall outward on both sides.
  for (int j = 0; j < l.bins_out * l.spb; ++j) {
    const int k = l.n_out - 1 - j;
    l.bin_of[k] = j / l.spb;
  }
  for (int j = 0; j < l.bins_in * l.spb; ++j) {
    const int k = l.n_out + j;
    l.bin_of[k] = l.bins_out + j / l.spb;
  }
  for (int k = 0; k < l.n_sites; ++k) {
    if (l.bin_of[k] < 0) continue;
    l.bin_size[l.bin_of[k]] += 1;
    l.bin_pos[l.bin_of[k]] += lat.position(k);
  }
  for (std::size_t b = 0; b < l.bin_pos.size(); ++b) l.bin_pos[b] /= l.bin_size[b];

  const double W = l.n_out * p.eps;
  const auto bulk = site_range(lat, -0.75 * W, -0.25 * W);
  l.bulk_lo = bulk.first;
  l.bulk_hi = bulk.second;

  l.intervals = p.parity_intervals;
  for (const Interval& iv : l.intervals) l.parity_ranges.push_back(site_range(lat, iv.a, iv.b));
  return l;
}

struct ReplicaResult {
  std::vector<BatchRecord> batches;
  std::vector<std::vector<double>> bin_density;  // per batch
  std::vector<double> parity_min, parity_max;
  double bulk_first = 0.0, bulk_second = 0.0;
  ReplicaCounts counts;
};

ReplicaResult run_replica(const SimParams& p, const Layout& l, int replica, int batches, long samples) {
  std::mt19937_64 rng(replica_seed(p.seed, replica));
  std::vector<std::uint8_t> s(l.n_sites, 0);
  const double r = p.model.beta * p.eps * p.eps;  // immigration rate per pair, lattice time
  const int clocks = (l.mode == Boundary::Absorbing) ? 3 : 0;
  const int face_site[3] = {l.n_out - 1, l.n_out, l.n_sites - 1};
  const double P = l.pairs;
  const double jump_slots = 2.0 * P;
  const double imm_end = jump_slots + r * P;
  const double R = imm_end + clocks;

  const double to_lattice = 1.0 / (p.eps * p.eps);
  const double t_burn = p.t_burn * to_lattice;
  const double dt = p.sample_dt * to_lattice;
  const long per_batch = samples / batches;

  ReplicaResult out;
  out.batches.assign(batches, BatchRecord{});
  out.bin_density.assign(batches, std::vector<double>(l.bin_size.size(), 0.0));
  const std::size_t n_par = l.intervals.size();
  out.parity_min.assign(n_par, 1.0);
  out.parity_max.assign(n_par, -1.0);
  std::vector<double> bin_acc(l.bin_size.size(), 0.0), par_acc(n_par, 0.0);
  double bulk_acc = 0.0, bulk_half[2] = {0.0, 0.0};
  std::uint64_t face[3] = {0, 0, 0}, face_mark[3] = {0, 0, 0};
  ReplicaCounts& c = out.counts;
  const int bulk_n = l.bulk_hi - l.bulk_lo;

  auto pair_left = [&](long q) -> int { return q < l.pairs_out ? static_cast<int>(q) : static_cast<int>(q - l.pairs_out) + l.n_out; };
  auto toggle = [&](int k) {
    if (s[k]) {
      s[k] = 0;
      c.annihilated += 2;  // the arriving particle and the resident
    } else {
      s[k] = 1;
    }
  };

  long next = 0;  // checkpoint index: 0 is the end of burn-in, then samples 1..samples
  double t_next = t_burn;
  auto checkpoint = [&](long idx) {
    if (idx == 0) {
      for (int f = 0; f < 3; ++f) face_mark[f] = face[f];
      return;
    }
    for (int k = 0; k < l.n_sites; ++k)
      if (s[k] && l.bin_of[k] >= 0) bin_acc[l.bin_of[k]] += 1.0;
    int occ = 0;
    for (int k = l.bulk_lo; k < l.bulk_hi; ++k) occ += s[k];
    const double bulk = bulk_n > 0 ? occ / (bulk_n * p.eps) : 0.0;
    bulk_acc += bulk;
    bulk_half[(idx - 1) * 2 < samples ? 0 : 1] += bulk;
    for (std::size_t q = 0; q < n_par; ++q) {
      int n = 0;
      for (int k = l.parity_ranges[q].first; k < l.parity_ranges[q].second; ++k) n += s[k];
      const double v = (n & 1) ? -1.0 : 1.0;
      par_acc[q] += v;
      out.parity_min[q] = std::min(out.parity_min[q], v);
      out.parity_max[q] = std::max(out.parity_max[q], v);
    }
    if (idx % per_batch == 0) {
      const int b = static_cast<int>(idx / per_batch) - 1;
      BatchRecord& rec = out.batches[b];
      const double n = static_cast<double>(per_batch);
      for (std::size_t q = 0; q < bin_acc.size(); ++q) {
        out.bin_density[b][q] = bin_acc[q] / (n * l.bin_size[q] * p.eps);
        bin_acc[q] = 0.0;
      }
      rec.bulk = bulk_acc / n;
      bulk_acc = 0.0;
      rec.parity.resize(n_par);
      for (std::size_t q = 0; q < n_par; ++q) {
        rec.parity[q] = par_acc[q] / n;
        par_acc[q] = 0.0;
      }
      const double span = per_batch * p.sample_dt;
      rec.rate_outside = static_cast<double>(face[0] - face_mark[0]) / span;
      rec.rate_inside = 0.5 * static_cast<double>((face[1] - face_mark[1]) + (face[2] - face_mark[2])) / span;
      for (int f = 0; f < 3; ++f) face_mark[f] = face[f];
      // Linear extrapolation to the wall from the two nearest bins.
      auto wall = [&](int b0, int b1) {
        const double x0 = l.bin_pos[b0], x1 = l.bin_pos[b1];
        const double r0 = out.bin_density[b][b0], r1 = out.bin_density[b][b1];
        return r0 - x0 * (r1 - r0) / (x1 - x0);
      };
      if (l.bins_out >= 2) rec.rho_wall_outside = wall(0, 1);
      if (l.bins_in >= 2) rec.rho_wall_inside = wall(l.bins_out, l.bins_out + 1);
    }
  };

  double t = 0.0;
  while (next <= samples) {
    t += -std::log(unit_open_closed(rng)) / R;
    while (next <= samples && t_next <= t) {
      checkpoint(next);
      ++next;
      t_next = t_burn + static_cast<double>(next) * dt;
    }
    if (next > samples) break;
    ++c.events;
    const double x = unit_closed_open(rng) * R;
    if (x < jump_slots) {
      const auto slot = static_cast<long>(x);
      const int k = pair_left(std::min<long>(slot >> 1, l.pairs - 1));
      const int from = (slot & 1) ? k + 1 : k;
      const int to = (slot & 1) ? k : k + 1;
      if (s[from]) {
        s[from] = 0;
        toggle(to);
      }
    } else if (x < imm_end) {
      const long q = std::min<long>(static_cast<long>((x - jump_slots) / r), l.pairs - 1);
      const int k = pair_left(q);
      c.created += 2;
      toggle(k);
      toggle(k + 1);
    } else {
      const int f = std::min(static_cast<int>(x - imm_end), clocks - 1);
      const int k = face_site[f];
      if (s[k]) {
        s[k] = 0;
        ++c.absorbed;
        ++face[f];
      }
    }
  }
  c.final_count = 0;
  for (auto v : s) c.final_count += v;
  const double half = static_cast<double>(samples) / 2.0;
  out.bulk_first = bulk_half[0] / half;
  out.bulk_second = bulk_half[1] / half;
  return out;
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

// ---------------------------------------------------------------------------

OccupancyLattice OccupancyLattice::make(Boundary mode, double eps, int cells_outside, int cells_inside) {
  OccupancyLattice l;
  l.mode = mode;
  l.eps = eps;
  l.n_outside = cells_outside;
  l.n_inside = (mode == Boundary::Absorbing) ? cells_inside - 1 : cells_inside;
  l.sites.assign(l.n_outside + l.n_inside, 0);
  return l;
}

double OccupancyLattice::position(int k) const {
  const double shift = (mode == Boundary::Reflecting) ? 0.5 : 0.0;
  if (k < n_outside) return -(n_outside - k - shift) * eps;
  return (k - n_outside + 1 - shift) * eps;
}

int OccupancyLattice::count() const {
  int n = 0;
  for (auto v : sites) n += v;
  return n;
}

int OccupancyLattice::count_inside() const {
  int n = 0;
  for (int k = n_outside; k < n_outside + n_inside; ++k) n += sites[k];
  return n;
}

int OccupancyLattice::count_in(double a, double b) const {
  int n = 0;
  for (int k = 0; k < n_outside + n_inside; ++k) {
    const double x = position(k);
    if (x > a && x <= b) n += sites[k];
  }
  return n;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CASIMIR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SimParams resolve(const SimParams& in) {
  SimParams p = in;
  p.model = validate(in.model);
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!finite_pos(p.eps) || !finite_pos(p.W_out) || !finite_pos(p.t_burn) || !finite_pos(p.t_sample) ||
      !finite_pos(p.sample_dt) || !finite_pos(p.max_events))
    throw Error(ErrorCode::InvalidArgument, "eps, W_out, times and max_events must be finite and positive");
  if (p.replicas < 1) throw Error(ErrorCode::InvalidArgument, "replicas must be >= 1");
  if (p.sample_dt > p.t_sample) throw Error(ErrorCode::InvalidArgument, "sample_dt exceeds t_sample");
  if (p.t_burn < 5.0 / (2.0 * p.model.beta) * (1.0 - 1e-12))
    throw Error(ErrorCode::InvalidArgument, "t_burn must be at least 5 / (2 beta)");
  const long cells_in = std::lround(p.model.L / p.eps);
  if (cells_in < 4) throw Error(ErrorCode::InvalidGeometry, "fewer than 4 lattice cells between the walls");
  p.eps = p.model.L / static_cast<double>(cells_in);
  const long cells_out = std::lround(p.W_out / p.eps);
  if (cells_out < 4) throw Error(ErrorCode::InvalidGeometry, "fewer than 4 lattice cells outside");
  p.W_out = static_cast<double>(cells_out) * p.eps;

  std::vector<Interval> ivs;
  auto add = [&](double a, double b) {
    for (const Interval& iv : ivs)
      if (same(iv.a, a) && same(iv.b, b)) return;
    ivs.push_back({a, b});
  };
  const double L = p.model.L;
  add(0.0, L);
  add(0.0, 0.5 * L);
  if (p.model.boundary == Boundary::Absorbing) {
    add(0.25 * L, 0.75 * L);
    if (p.W_out >= 2.0) add(-2.0, -1.0);
    if (p.W_out >= 1.0) add(-1.0, -0.5);
  }
  for (const Interval& iv : in.parity_intervals) {
    if (!(iv.a <= iv.b) || iv.a < -p.W_out - 1e-12 || iv.b > L + 1e-12)
      throw Error(ErrorCode::OutOfDomain, "parity interval outside the simulated domain");
    add(iv.a, iv.b);
  }
  p.parity_intervals = ivs;
  return p;
}

SimEstimate simulate(const SimParams& params) {
  const SimParams p = resolve(params);
  const Layout l = make_layout(p);
  if (l.bins_out < 2 || l.bins_in < 2) throw Error(ErrorCode::InvalidGeometry, "need two density bins per side");

  const int per_replica = std::max(1, (20 + p.replicas - 1) / p.replicas);
  const int batches = p.replicas * per_replica;
  long samples = std::max<long>(std::lround(p.t_sample / p.sample_dt), per_replica);
  samples = ((samples + per_replica - 1) / per_replica) * per_replica;

  const double r = p.model.beta * p.eps * p.eps;
  const double rate = (2.0 + r) * l.pairs + 3.0;
  const double expected = rate * (p.t_burn + samples * p.sample_dt) / (p.eps * p.eps);
  if (expected > p.max_events) throw Error(ErrorCode::Overflow, "expected event count exceeds max_events");

  std::vector<ReplicaResult> results(p.replicas);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= p.replicas) return;
      try {
        results[k] = run_replica(p, l, k, per_replica, samples);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min(resolve_threads(p.threads), p.replicas);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  SimEstimate est;
  est.params = p;
  // Reduction in replica order keeps the result independent of the schedule.
  std::vector<std::vector<double>> bins;
  std::vector<double> first, second, drift;
  for (int k = 0; k < p.replicas; ++k) {
    const ReplicaResult& rr = results[k];
    for (int b = 0; b < per_replica; ++b) {
      est.batches.push_back(rr.batches[b]);
      bins.push_back(rr.bin_density[b]);
    }
    drift.push_back(rr.bulk_second - rr.bulk_first);
    est.meta.per_replica.push_back(rr.counts);
    est.meta.events += rr.counts.events;
    est.meta.created += rr.counts.created;
    est.meta.annihilated += rr.counts.annihilated;
    est.meta.absorbed += rr.counts.absorbed;
  }

  const OccupancyLattice lat = OccupancyLattice::make(p.model.boundary, p.eps, l.n_out, static_cast<int>(std::lround(p.model.L / p.eps)));
  est.outside.mode = est.inside.mode = p.model.boundary;
  est.outside.region = Region::Outside;
  est.inside.region = Region::Inside;
  for (std::size_t q = 0; q < l.bin_size.size(); ++q) {
    std::vector<double> v;
    for (const auto& b : bins) v.push_back(b[q]);
    const MeanSe m = mean_se(v);
    const ProfilePoint pt{l.bin_pos[q], m.mean, m.se};
    if (static_cast<int>(q) < l.bins_out)
      est.outside.points.push_back(pt);
    else
      est.inside.points.push_back(pt);
  }
  {
    std::vector<double> v;
    for (const auto& b : est.batches) v.push_back(b.bulk);
    const MeanSe m = mean_se(v);
    est.bulk_density = m.mean;
    est.bulk_density_se = m.se;
  }
  for (std::size_t q = 0; q < l.intervals.size(); ++q) {
    std::vector<double> v;
    for (const auto& b : est.batches) v.push_back(b.parity[q]);
    const MeanSe m = mean_se(v);
    ParityMeasurement pm{l.intervals[q], m.mean, m.se, 1.0, -1.0};
    for (const auto& rr : results) {
      pm.min_sample = std::min(pm.min_sample, rr.parity_min[q]);
      pm.max_sample = std::max(pm.max_sample, rr.parity_max[q]);
    }
    est.parity.push_back(pm);
  }

  SimMetadata& m = est.meta;
  m.seed = p.seed;
  m.replicas = p.replicas;
  m.eps = p.eps;
  m.W_out = p.W_out;
  m.L = p.model.L;
  m.sites_outside = lat.n_outside;
  m.sites_inside = lat.n_inside;
  m.sites_per_bin = l.spb;
  m.batches = batches;
  m.samples_per_replica = samples;
  const MeanSe d = mean_se(drift);
  m.drift_z = d.se > 0.0 ? std::abs(d.mean) / d.se : 0.0;
  m.drift_ok = m.drift_z < 2.0;
  return est;
}

const ParityMeasurement& find_parity(const SimEstimate& est, double a, double b) {
  for (const ParityMeasurement& pm : est.parity)
    if (same(pm.interval.a, a) && same(pm.interval.b, b)) return pm;
  throw Error(ErrorCode::OutOfDomain, "interval was not measured");
}

ParityMeasurement measure_parity(const SimParams& params, double a, double b) {
  const SimParams p = resolve(params);
  if (!(a <= b) || a < -p.W_out - 1e-12 || b > p.model.L + 1e-12)
    throw Error(ErrorCode::OutOfDomain, "parity interval outside the simulated domain");
  if (a == b) return {{a, b}, 1.0, 0.0, 1.0, 1.0};  // no sites in an empty interval
  SimParams q = params;
  q.parity_intervals.push_back({a, b});
  return find_parity(simulate(q), a, b);
}

ForceResult force_estimator(const SimEstimate& est, Boundary mode, bool strict) {
  if (est.params.model.boundary != mode) throw Error(ErrorCode::WrongMode, "estimate was run with the other wall type");
  std::vector<double> v;
  if (mode == Boundary::Reflecting) {
    if (est.inside.points.size() < 4 || est.outside.points.size() < 4)
      throw Error(ErrorCode::InsufficientStatistics, "need at least 4 bins on each side of the wall");
    for (const auto& b : est.batches) v.push_back(b.rho_wall_outside - b.rho_wall_inside);
  } else {
    for (const auto& b : est.batches) v.push_back(b.rate_outside - b.rate_inside);
  }
  const MeanSe m = mean_se(v);
  if (strict && !(m.se <= 0.5 * std::abs(m.mean)))
    throw Error(ErrorCode::InsufficientStatistics,
                "force estimate " + std::to_string(m.mean) + " has standard error " + std::to_string(m.se));
  return {m.mean, mode, Method::Simulation, m.se};
}

}  // namespace casimir
