// Command-line front end: forces, sweeps, profiles, simulations, verification.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "casimir/closed_form.hpp"
#include "casimir/error.hpp"
#include "casimir/lattice_sim.hpp"
#include "casimir/pde_oracle.hpp"
#include "casimir/verify.hpp"
#include "json.hpp"

using namespace casimir;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kBadInput = 2, kNumerical = 3, kIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveBeta:
    case ErrorCode::NonPositiveL:
    case ErrorCode::NonFiniteParameter:
    case ErrorCode::WrongMode:
    case ErrorCode::OutOfDomain:
    case ErrorCode::TauNotInUpperHalfPlane:
    case ErrorCode::NonPositiveArgument:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::InvalidGeometry:
    case ErrorCode::InvalidArgument:
      return kBadInput;
    default:
      return kNumerical;
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("write to '" + path + "' failed");
}

// Writes to path, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw IoError("write to stdout failed");
  } else {
    write_file(path, text);
  }
}

Method parse_method(const std::string& s) {
  if (s == "closed") return Method::ClosedForm;
  if (s == "oracle") return Method::PdeOracle;
  if (s == "flux-limit") return Method::FluxLimit;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "'");
}

ForceResult compute_force(const ModelParams& p, Method m) {
  switch (m) {
    case Method::ClosedForm:
      return p.boundary == Boundary::Reflecting ? force_reflecting(p) : force_absorbing(p);
    case Method::PdeOracle:
      return p.boundary == Boundary::Reflecting ? force_reflecting_pde(p) : force_absorbing_pde(p);
    case Method::FluxLimit:
      if (p.boundary != Boundary::Absorbing) throw Error(ErrorCode::WrongMode, "flux-limit applies to absorbing walls");
      return force_absorbing_flux_limit(p);
    default:
      throw Error(ErrorCode::InvalidArgument, "method not available here");
  }
}

json profile_json(const DensityProfile& d) {
  json pts = json::array();
  for (const ProfilePoint& p : d.points) pts.push_back({{"x", p.x}, {"rho", p.rho}, {"se", p.sigma}});
  return pts;
}

json estimate_json(const SimEstimate& e) {
  const SimParams& p = e.params;
  json out;
  out["params"] = {{"mode", to_string(p.model.boundary)}, {"beta", p.model.beta}, {"L", p.model.L},
                   {"eps", p.eps},  {"W_out", p.W_out},   {"t_burn", p.t_burn},
                   {"t_sample", e.meta.samples_per_replica * p.sample_dt},
                   {"sample_dt", p.sample_dt}, {"replicas", p.replicas}, {"seed", p.seed}};
  out["density"] = {{"outside", profile_json(e.outside)}, {"inside", profile_json(e.inside)}};
  out["bulk_density"] = {{"mean", e.bulk_density}, {"se", e.bulk_density_se}};
  json par = json::array();
  for (const ParityMeasurement& m : e.parity)
    par.push_back({{"a", m.interval.a}, {"b", m.interval.b}, {"mean", m.mean}, {"se", m.se},
                   {"min_sample", m.min_sample}, {"max_sample", m.max_sample}});
  out["parity_mean"] = par;
  const ForceResult f = force_estimator(e, p.model.boundary, false);
  const double se = f.uncertainty.value_or(0.0);
  out["force_estimate"] = {{"mode", to_string(f.mode)}, {"method", to_string(f.method)}, {"value", f.value},
                           {"uncertainty", se}, {"resolved", se <= 0.5 * std::abs(f.value)}};
  json batches = json::array();
  for (const BatchRecord& b : e.batches)
    batches.push_back({{"rho_wall_outside", b.rho_wall_outside}, {"rho_wall_inside", b.rho_wall_inside},
                       {"rate_outside", b.rate_outside}, {"rate_inside", b.rate_inside},
                       {"bulk", b.bulk}, {"parity", b.parity}});
  out["batches"] = batches;
  const SimMetadata& m = e.meta;
  json reps = json::array();
  for (const ReplicaCounts& r : m.per_replica)
    reps.push_back({{"events", r.events}, {"created", r.created}, {"annihilated", r.annihilated},
                    {"absorbed", r.absorbed}, {"final_count", r.final_count}});
  out["metadata"] = {{"version", kVersion},
                     {"seed", m.seed},
                     {"replicas", m.replicas},
                     {"eps", m.eps},
                     {"W_out", m.W_out},
                     {"sites_outside", m.sites_outside},
                     {"sites_inside", m.sites_inside},
                     {"sites_per_bin", m.sites_per_bin},
                     {"batches", m.batches},
                     {"samples_per_replica", m.samples_per_replica},
                     {"events", m.events},
                     {"created", m.created},
                     {"annihilated", m.annihilated},
                     {"absorbed", m.absorbed},
                     {"drift_z", m.drift_z},
                     {"drift_ok", m.drift_ok},
                     {"per_replica", reps}};
  return out;
}

std::string density_csv(const SimEstimate& e) {
  std::string s = "x,rho,se,region\n";
  for (const ProfilePoint& p : e.outside.points) s += num(p.x) + "," + num(p.rho) + "," + num(p.sigma) + ",outside\n";
  for (const ProfilePoint& p : e.inside.points) s += num(p.x) + "," + num(p.rho) + "," + num(p.sigma) + ",inside\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Casimir forces for annihilating walkers with pairwise immigration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string mode = "reflecting", method = "closed", out_path, csv_path, suite = "all";
  double beta = 1.0, L = 1.0, tol = 0.0, L_min = 0.1, L_max = 5.0, x_min = 0.0;
  int points = 50, grid = 33;
  bool timestamps = false;
  SimParams sim;
  std::vector<std::string> parity_specs;

  auto add_model = [&](CLI::App* c) {
    c->add_option("--mode", mode, "reflecting or absorbing")->check(CLI::IsMember({"reflecting", "absorbing"}));
    c->add_option("--beta", beta, "immigration intensity");
  };

  CLI::App* force = app.add_subcommand("force", "wall force as JSON");
  add_model(force);
  force->add_option("--L", L, "wall separation");
  force->add_option("--method", method, "closed, oracle or flux-limit")->check(CLI::IsMember({"closed", "oracle", "flux-limit"}));
  force->add_option("--tol", tol, "fail (exit 3) if the reported uncertainty exceeds tol * |value|");

  CLI::App* sweep = app.add_subcommand("sweep", "force over a uniform L grid as CSV");
  add_model(sweep);
  sweep->add_option("--L-min", L_min);
  sweep->add_option("--L-max", L_max);
  sweep->add_option("--points", points);
  sweep->add_option("--method", method)->check(CLI::IsMember({"closed", "oracle", "flux-limit"}));
  sweep->add_option("--out", out_path, "CSV path (default stdout)");

  CLI::App* density = app.add_subcommand("density", "closed-form density profile as CSV");
  add_model(density);
  density->add_option("--L", L);
  density->add_option("--grid", grid, "points per region")->check(CLI::Range(2, 1000000));
  density->add_option("--x-min", x_min, "left end of the outside grid (default -max(L, 5/sqrt(2 beta)))");
  density->add_option("--out", out_path, "CSV path (default stdout)");

  CLI::App* simc = app.add_subcommand("simulate", "lattice Monte Carlo; JSON estimate and density CSV");
  add_model(simc);
  simc->add_option("--L", L);
  simc->add_option("--eps", sim.eps, "lattice spacing");
  simc->add_option("--W-out", sim.W_out, "outside segment width");
  simc->add_option("--t-burn", sim.t_burn);
  simc->add_option("--t-sample", sim.t_sample);
  simc->add_option("--sample-dt", sim.sample_dt);
  simc->add_option("--replicas", sim.replicas);
  simc->add_option("--seed", sim.seed);
  simc->add_option("--max-events", sim.max_events, "per-replica event budget");
  simc->add_option("--parity", parity_specs, "extra parity interval a:b (repeatable)");
  simc->add_option("--out", out_path, "JSON path (default stdout)");
  simc->add_option("--csv", csv_path, "density CSV path");

  std::uint64_t verify_seed = 42;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite; JSON report");
  verify->add_option("--suite", suite)->check(CLI::IsMember({"all", "closed-form", "oracle", "asymptotics", "simulation"}));
  verify->add_option("--seed", verify_seed);
  verify->add_flag("--timestamps", timestamps, "record wall-clock time in the report");
  verify->add_option("--out", out_path, "JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*force) {
      const ModelParams p = validate({beta, L, parse_boundary(mode)});
      const ForceResult f = compute_force(p, parse_method(method));
      json j = {{"mode", mode}, {"beta", beta}, {"L", L}, {"method", to_string(f.method)}, {"value", f.value}};
      j["uncertainty"] = f.uncertainty ? json(*f.uncertainty) : json(nullptr);
      std::cout << j.dump(2) << "\n";
      if (tol > 0.0 && f.uncertainty && *f.uncertainty > tol * std::abs(f.value)) {
        std::cerr << "error: uncertainty exceeds the requested tolerance\n";
        return kNumerical;
      }
    } else if (*sweep) {
      if (!(L_min > 0.0 && L_min < L_max) || points < 2)
        throw Error(ErrorCode::InvalidArgument, "need 0 < L-min < L-max and points >= 2");
      const Boundary b = parse_boundary(mode);
      const Method m = parse_method(method);
      std::string csv = "L,force,method,beta\n";
      for (int i = 0; i < points; ++i) {
        const double Li = (i == points - 1) ? L_max : L_min + (L_max - L_min) * i / (points - 1);
        const ForceResult f = compute_force(validate({beta, Li, b}), m);
        csv += num(Li) + "," + num(f.value) + "," + std::string(to_string(f.method)) + "," + num(beta) + "\n";
      }
      emit(out_path, csv);
    } else if (*density) {
      const ModelParams p = validate({beta, L, parse_boundary(mode)});
      const double left = x_min < 0.0 ? x_min : -std::max(L, 5.0 / std::sqrt(2.0 * beta));
      std::vector<double> xo, xi;
      for (int k = 0; k < grid; ++k) {
        xo.push_back(k == grid - 1 ? 0.0 : left * (1.0 - static_cast<double>(k) / (grid - 1)));
        xi.push_back(k == grid - 1 ? L : L * k / (grid - 1));
      }
      std::string csv = "x,rho,source\n";
      for (const ProfilePoint& q : density_profile(p, Region::Outside, xo).points)
        csv += num(q.x) + "," + num(q.rho) + ",outside\n";
      for (const ProfilePoint& q : density_profile(p, Region::Inside, xi).points)
        csv += num(q.x) + "," + num(q.rho) + ",inside\n";
      emit(out_path, csv);
    } else if (*simc) {
      sim.model = {beta, L, parse_boundary(mode)};
      for (const std::string& s : parity_specs) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "parity interval must be a:b");
        try {
          sim.parity_intervals.push_back({std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))});
        } catch (const std::logic_error&) {
          throw Error(ErrorCode::InvalidArgument, "bad parity interval '" + s + "'");
        }
      }
      const SimEstimate e = simulate(sim);
      emit(out_path, estimate_json(e).dump(2) + "\n");
      if (!csv_path.empty()) write_file(csv_path, density_csv(e));
    } else if (*verify) {
      VerifyOptions o;
      o.seed = verify_seed;
      o.timestamps = timestamps;
      const VerifyReport r = run_verify(suite, o);
      emit(out_path, to_json(r).dump(2) + "\n");
      if (!r.overall) return kVerifyFailed;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
