/// wavectl: batch front-end for the solitary-wave library.
///
/// Subcommands: shear | solve | verify | continue | sturm. Every command
/// writes its outputs under --out and emits a run manifest with input and
/// output checksums; identical inputs produce identical output checksums.
///
/// Exit codes: 0 success, 1 verdict failure, 2 input error, 3 solver failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "solwave/continuation.hpp"
#include "solwave/diagnostics.hpp"
#include "solwave/waveio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace solwave;

namespace {

constexpr const char* kToolVersion = "wavectl 0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  int workers = 1;
  std::string format = "json";
  json config = json::object();
};

double config_get(const json& cfg, const std::string& section,
                  const std::string& key, double fallback) {
  if (cfg.contains(section) && cfg.at(section).contains(key))
    return cfg.at(section).at(key).get<double>();
  return fallback;
}

std::string file_checksum(const fs::path& path) {
  const std::string bytes = read_text_file(path);
  return payload_checksum(bytes);
}

struct ManifestWriter {
  const GlobalOptions* opts;
  std::string command;
  std::vector<std::string> argv_snapshot;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void write() const {
    json j;
    j["command_line"] = argv_snapshot;
    j["config"] = opts->config;
    j["tool_version"] = kToolVersion;
    j["inputs"] = json::array();
    for (const auto& p : inputs)
      j["inputs"].push_back({{"path", p.string()},
                             {"checksum", file_checksum(p)}});
    j["outputs"] = json::array();
    for (const auto& p : outputs)
      j["outputs"].push_back({{"path", p.string()},
                              {"checksum", file_checksum(p)}});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    j["wall_time_s"] = wall;
    write_text_file_atomic(fs::path(opts->out_dir) /
                               ("manifest-" + command + ".json"),
                           j.dump(2) + "\n");
  }
};

std::string fmt(double v) { return num::format_g17(v); }

// ---------------------------------------------------------------------------
// shear
// ---------------------------------------------------------------------------

int cmd_shear(const GlobalOptions& g, const std::string& profile_path,
              int np, ManifestWriter& manifest) {
  const ShearProfile profile =
      profile_from_json_text(read_text_file(profile_path));
  const AsymptoticState state = build_asymptotic_state(profile, np);
  const double ratio_cap = 2.0 / std::sqrt(3.0);

  const double lam_star = lambda_star_of(state);
  const double gam_star = gamma_star_of(state);

  std::cout << "quantity            value\n";
  std::cout << "flux m              " << fmt(state.flux) << "\n";
  std::cout << "froude F            " << fmt(state.froude) << "\n";
  std::cout << "lambda ratio        " << fmt(state.lambda_ratio) << "\n";
  std::cout << "bernoulli lambda    " << fmt(state.bernoulli_const) << "\n";
  std::cout << "lambda*             " << fmt(lam_star) << "\n";
  std::cout << "gamma* (surface)    " << fmt(gam_star) << "\n";
  if (state.froude > 1.0)
    std::cout << "criticality         supercritical (F > 1)\n";
  else if (state.froude < 1.0)
    std::cout << "criticality         subcritical (F < 1)\n";
  else
    std::cout << "criticality         critical (F = 1)\n";
  if (state.lambda_ratio < ratio_cap)
    std::cout << "froude cap          F < "
              << fmt(1.0 / std::sqrt(1.0 -
                                     0.75 * state.lambda_ratio *
                                         state.lambda_ratio))
              << " (lambda ratio below 2/sqrt(3))\n";
  else
    std::cout << "froude cap          not applicable (lambda ratio >= "
                 "2/sqrt(3))\n";

  json out;
  out["flux"] = state.flux;
  out["froude"] = state.froude;
  out["froude_via_height"] = state.froude_via_height;
  out["lambda_ratio"] = state.lambda_ratio;
  out["bernoulli_const"] = state.bernoulli_const;
  out["lambda_star"] = lam_star;
  out["gamma_star"] = gam_star;
  out["min_relative_speed"] = state.min_relative_speed;
  out["froude_cap_applicable"] = state.lambda_ratio < ratio_cap;
  const fs::path out_path = fs::path(g.out_dir) / "shear.json";
  write_text_file_atomic(out_path, out.dump(2) + "\n");
  manifest.inputs.push_back(profile_path);
  manifest.outputs.push_back(out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sturm
// ---------------------------------------------------------------------------

int cmd_sturm(const GlobalOptions& g, const std::string& profile_path,
              int np, int n_eigs, ManifestWriter& manifest) {
  const ShearProfile profile =
      profile_from_json_text(read_text_file(profile_path));
  const AsymptoticState state = build_asymptotic_state(profile, np);
  const SturmSpectrum spec = solve_sturm(state, n_eigs);

  std::cout << "froude " << fmt(state.froude) << "  mu:";
  for (double mu : spec.mu) std::cout << ' ' << fmt(mu);
  std::cout << "  s1 " << fmt(spec.s1) << "\n";
  if (!(spec.mu[0] > 0.0))
    std::cout << "warning: subcritical state (mu_1 <= 0), no solitary decay "
                 "mode\n";

  json out;
  out["mu"] = spec.mu;
  out["phi1"] = spec.phi1;
  out["s1"] = spec.s1;
  out["froude"] = state.froude;
  const fs::path out_path = fs::path(g.out_dir) / "spectrum.json";
  write_text_file_atomic(out_path, out.dump(2) + "\n");
  manifest.inputs.push_back(profile_path);
  manifest.outputs.push_back(out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveFlags {
  double tol = 1e-10;
  int max_iters = 25;
  double domain_factor = 40.0;
  double half_length = 0.0;  // 0: derive from the decay rate
  int nq = 801;
  int np = 65;
  double sigma = 0.0;
  double seed_r = 0.0;  // 0: d (F^2 - 1)
  bool subcritical = false;
  std::string out_wave;
};

int cmd_solve(const GlobalOptions& g, const std::string& profile_path,
              const SolveFlags& flags, ManifestWriter& manifest) {
  const ShearProfile profile =
      profile_from_json_text(read_text_file(profile_path));
  const AsymptoticState state = build_asymptotic_state(profile, flags.np);

  if (state.froude < 1.0 - 1e-9 && !flags.subcritical) {
    std::cerr << "refusing: profile is subcritical (F = " << fmt(state.froude)
              << " < 1) and no solitary wave of elevation exists there; "
                 "pass --subcritical for experimental runs (e.g. with "
                 "surface tension)\n";
    return kExitInput;
  }

  // Seed direction and decay rate. With tension the far-field mode comes
  // from the Robin-modified problem for any Froude number.
  double rate = 0.0;
  std::vector<double> mode;
  try {
    if (flags.sigma != 0.0) {
      const DecayMode dm = tension_decay_mode(state, flags.sigma);
      rate = std::sqrt(dm.mu);
      mode = dm.phi;
    } else {
      const SturmSpectrum spec = solve_sturm(state);
      if (!(spec.mu[0] > 0.0))
        throw SubcriticalSeedError(
            "mu_1 <= 0: no sech^2 seed exists at this Froude number");
      rate = std::sqrt(spec.mu[0]);
      mode = spec.phi1;
    }
  } catch (const Error& e) {
    std::cerr << "seeding failed: " << e.what() << "\n";
    return kExitSolver;
  }

  const double d = profile.d;
  const double seed_r = flags.seed_r != 0.0
                            ? flags.seed_r
                            : d * (state.froude * state.froude - 1.0);
  const double L =
      flags.half_length > 0.0 ? flags.half_length : flags.domain_factor / rate;
  const StripGrid grid = StripGrid::half(L, flags.nq, flags.np, state.flux);

  SolveOptions sopts;
  sopts.tol_scale = flags.tol / (profile.g * profile.d);
  sopts.max_iters = flags.max_iters;
  const HeightField seed = seed_from_mode(state, mode, rate, seed_r, grid);
  const WaveSolution sol = newton_solve(seed, state, flags.sigma, sopts);
  if (!sol.converged) {
    std::cerr << "solver failed: " << sol.message << "\n";
    return kExitSolver;
  }

  const fs::path wave_path = flags.out_wave.empty()
                                 ? fs::path(g.out_dir) / "wave.json"
                                 : fs::path(flags.out_wave);
  const std::string checksum = write_wave(sol, wave_path);
  manifest.inputs.push_back(profile_path);
  manifest.outputs.push_back(wave_path);

  SturmSpectrum spec_for_shape;
  const SturmSpectrum* spec_ptr = nullptr;
  try {
    spec_for_shape = solve_sturm(state);
    spec_ptr = &spec_for_shape;
  } catch (const Error&) {
  }
  const DiagnosticsReport rep = run_diagnostics(sol, spec_ptr);
  int held = 0, applicable = 0;
  for (const auto& row : rep.bounds) {
    if (!row.applicable) continue;
    ++applicable;
    if (row.holds) ++held;
  }
  std::cout << "F " << fmt(state.froude) << "  amplitude " << fmt(sol.amplitude)
            << "  residual " << fmt(sol.residual_norm) << "  iters "
            << sol.newton_iters << "  bounds " << held << "/" << applicable
            << "  wave " << wave_path.string() << "  " << checksum << "\n";
  return rep.all_applicable_bounds_hold() ? kExitOk : kExitVerdict;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyResult {
  std::string line;
  int exit_code = kExitOk;
  fs::path report_json, report_csv;
};

VerifyResult verify_one(const GlobalOptions& g, const fs::path& wave_path,
                        double identity_tol, double flow_force_tol) {
  VerifyResult out;
  const LoadedWave loaded = read_wave_audit(wave_path);
  const WaveSolution& sol = loaded.solution;
  const std::string stem = wave_path.stem().string();

  if (loaded.quarantined) {
    // The field violates the height invariants; no residual or identity can
    // be evaluated on it. Report the audit findings only.
    json j;
    j["wave_file"] = wave_path.string();
    j["quarantined"] = true;
    j["quarantine_reason"] = loaded.quarantine_reason;
    j["flag"] = "unvalidated field";
    j["froude"] = sol.state.froude;
    j["verdict"] = "fail";
    out.report_json = fs::path(g.out_dir) / (stem + ".report.json");
    out.report_csv = fs::path(g.out_dir) / (stem + ".report.csv");
    write_text_file_atomic(out.report_json, j.dump(2) + "\n");
    write_text_file_atomic(out.report_csv,
                           "name,lhs,rhs,residual,verdict\n"
                           "unvalidated_field,,,,fail\n");
    out.line = "FAIL " + wave_path.string() + "  " +
               loaded.quarantine_reason + "  [unvalidated field]";
    out.exit_code = kExitVerdict;
    return out;
  }

  SturmSpectrum spec;
  const SturmSpectrum* spec_ptr = nullptr;
  try {
    spec = solve_sturm(sol.state);
    spec_ptr = &spec;
  } catch (const Error&) {
  }
  const DiagnosticsReport rep = run_diagnostics(sol, spec_ptr);

  bool residual_ok = rep.identity_lower.residual <= identity_tol &&
                     rep.identity_tension.residual <= identity_tol &&
                     rep.bernoulli_surface_residual <= identity_tol &&
                     rep.flow_force.column_spread <= flow_force_tol &&
                     rep.flow_force.formula_gap <= flow_force_tol;
  if (rep.identity_classic.defined)
    residual_ok = residual_ok && rep.identity_classic.residual <= identity_tol &&
                  rep.identity_extra.residual <= identity_tol &&
                  rep.identity_sum.residual <= identity_tol;
  if (rep.starr_residual)
    residual_ok = residual_ok && *rep.starr_residual <= identity_tol;
  if (rep.starr_tension_residual)
    residual_ok = residual_ok && *rep.starr_tension_residual <= identity_tol;

  const bool bounds_ok = rep.all_applicable_bounds_hold();
  const bool pass = residual_ok && bounds_ok;

  json j = json::parse(report_to_json_text(rep));
  j["wave_file"] = wave_path.string();
  j["quarantined"] = false;
  if (loaded.conversion_residual > 0.0)
    j["conversion_residual"] = loaded.conversion_residual;
  j["verdict"] = pass ? "pass" : "fail";

  out.report_json = fs::path(g.out_dir) / (stem + ".report.json");
  out.report_csv = fs::path(g.out_dir) / (stem + ".report.csv");
  write_text_file_atomic(out.report_json, j.dump(2) + "\n");
  write_text_file_atomic(out.report_csv,
                         report_to_csv_text(rep, identity_tol, flow_force_tol));

  std::ostringstream os;
  os << (pass ? "PASS " : "FAIL ") << wave_path.string() << "  F "
     << fmt(rep.froude) << "  amplitude " << fmt(rep.amplitude)
     << "  lower-identity " << fmt(rep.identity_lower.residual)
     << "  bernoulli " << fmt(rep.bernoulli_surface_residual);
  out.line = os.str();
  out.exit_code = pass ? kExitOk : kExitVerdict;
  return out;
}

int cmd_verify(const GlobalOptions& g, const std::vector<std::string>& waves,
               ManifestWriter& manifest) {
  const double identity_tol =
      config_get(g.config, "verify", "identity_tol", 1e-3);
  const double flow_force_tol =
      config_get(g.config, "verify", "flow_force_tol", 1e-4);

  std::vector<VerifyResult> results(waves.size());
  std::vector<std::string> errors(waves.size());
  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t mine;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= waves.size()) return;
        mine = next++;
      }
      try {
        results[mine] =
            verify_one(g, waves[mine], identity_tol, flow_force_tol);
      } catch (const Error& e) {
        errors[mine] = e.what();
      }
    }
  };
  const int n_workers =
      std::max(1, std::min<int>(g.workers, static_cast<int>(waves.size())));
  std::vector<std::thread> pool;
  for (int k = 0; k < n_workers; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int exit_code = kExitOk;
  for (std::size_t k = 0; k < waves.size(); ++k) {
    manifest.inputs.push_back(waves[k]);
    if (!errors[k].empty()) {
      std::cerr << "error: " << waves[k] << ": " << errors[k] << "\n";
      exit_code = std::max(exit_code, kExitInput);
      continue;
    }
    std::cout << results[k].line << "\n";
    if (g.format == "csv")
      std::cout << read_text_file(results[k].report_csv);
    manifest.outputs.push_back(results[k].report_json);
    manifest.outputs.push_back(results[k].report_csv);
    exit_code = std::max(exit_code, results[k].exit_code);
  }
  return exit_code;
}

// ---------------------------------------------------------------------------
// continue
// ---------------------------------------------------------------------------

struct ContinueFlags {
  double froude_start = 1.05;
  int steps = 20;
  double step = 0.02;
  double max_step = 0.06;
  double froude_cap = 4.0;
  double stagnation_fraction = 0.95;
  int np = 33;
  int nq = 301;
  double domain_factor = 40.0;
  double seed_r = 0.0;
  int direction = +1;
};

int cmd_continue(const GlobalOptions& g, const std::string& ustar_path,
                 const ContinueFlags& flags, ManifestWriter& manifest) {
  const FamilyInput family = family_from_json_text(read_text_file(ustar_path));

  ContinuationOptions opts;
  opts.np = flags.np;
  opts.nq = flags.nq;
  opts.domain_factor = flags.domain_factor;
  opts.step = flags.step;
  opts.max_step = flags.max_step;
  opts.max_points = flags.steps;
  opts.froude_cap = flags.froude_cap;
  opts.stagnation_fraction = flags.stagnation_fraction;
  opts.seed_amplitude = flags.seed_r;

  ContinuationBranch branch;
  try {
    branch = continue_branch(family.ustar, family.g, family.d,
                             flags.froude_start, flags.direction, opts);
  } catch (const NormalizationError&) {
    throw;  // input error, handled by the caller
  } catch (const InvalidProfileError&) {
    throw;
  } catch (const Error& e) {
    std::cerr << "continuation failed: " << e.what() << "\n";
    return kExitSolver;
  }

  const fs::path log_path = fs::path(g.out_dir) / "branch.jsonl";
  const fs::path side_dir = fs::path(g.out_dir) / "branch-waves";
  write_branch(branch, log_path, side_dir);

  const double ratio_cap = 2.0 / std::sqrt(3.0);
  std::ostringstream csv;
  csv << "froude,amplitude,max_eta,sup_u_over_c,min_hp,arclength,"
         "froude_cap_margin\n";
  for (const auto& pt : branch.points) {
    const double lam_ratio = pt.solution->state.lambda_ratio;
    const double cap = lam_ratio < ratio_cap
                           ? 1.0 / std::sqrt(1.0 - 0.75 * lam_ratio * lam_ratio)
                           : std::numeric_limits<double>::quiet_NaN();
    csv << fmt(pt.froude) << ',' << fmt(pt.amplitude) << ',' << fmt(pt.max_eta)
        << ',' << fmt(pt.sup_u_over_c) << ',' << fmt(pt.min_hp) << ','
        << fmt(pt.arclength) << ',' << fmt(cap - pt.froude) << '\n';
  }
  const fs::path csv_path = fs::path(g.out_dir) / "branch.csv";
  write_text_file_atomic(csv_path, csv.str());

  manifest.inputs.push_back(ustar_path);
  manifest.outputs.push_back(log_path);
  manifest.outputs.push_back(csv_path);

  std::cout << "branch points " << branch.points.size() << ", F in ["
            << fmt(branch.points.front().froude) << ", "
            << fmt(branch.points.back().froude) << "]\n";
  std::cout << "endpoint: " << to_string(branch.endpoint) << " ("
            << branch.endpoint_detail << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solitary water waves on shear flows: compute and verify"};
  app.set_version_flag("--version", kToolVersion);

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--workers", g.workers, "worker threads for multi-file runs");
  app.add_option("--format", g.format, "stdout format: json|csv (reports)")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string profile_path, ustar_path;
  std::vector<std::string> wave_paths;
  int shear_np = 257, sturm_np = 257, n_eigs = 2;
  SolveFlags sf;
  ContinueFlags cf;

  auto* shear_cmd = app.add_subcommand("shear", "asymptotic shear quantities");
  shear_cmd->add_option("profile", profile_path)->required();
  shear_cmd->add_option("--np", shear_np, "state grid size");

  auto* sturm_cmd = app.add_subcommand("sturm", "linearization spectrum");
  sturm_cmd->add_option("profile", profile_path)->required();
  sturm_cmd->add_option("--np", sturm_np, "state grid size");
  sturm_cmd->add_option("--n-eigs", n_eigs, "eigenvalue count");

  auto* solve_cmd = app.add_subcommand("solve", "compute a solitary wave");
  solve_cmd->add_option("profile", profile_path)->required();
  solve_cmd->add_option("--tol", sf.tol, "residual tolerance");
  solve_cmd->add_option("--max-iters", sf.max_iters);
  solve_cmd->add_option("--L", sf.half_length, "truncation half-length");
  solve_cmd->add_option("--domain-factor", sf.domain_factor,
                        "L = factor / decay rate when --L is absent");
  solve_cmd->add_option("--nq", sf.nq);
  solve_cmd->add_option("--np", sf.np);
  solve_cmd->add_option("--sigma", sf.sigma, "surface tension coefficient");
  solve_cmd->add_option("--seed-r", sf.seed_r, "seed amplitude");
  solve_cmd->add_flag("--subcritical", sf.subcritical,
                      "allow experimental subcritical runs");
  solve_cmd->add_option("--out-wave", sf.out_wave, "wave file path");

  auto* verify_cmd = app.add_subcommand("verify", "verify wave files");
  verify_cmd->add_option("waves", wave_paths)->required();

  auto* continue_cmd =
      app.add_subcommand("continue", "trace a solution branch");
  continue_cmd->add_option("ustar", ustar_path)->required();
  continue_cmd->add_option("--F-start", cf.froude_start);
  continue_cmd->add_option("--steps", cf.steps);
  continue_cmd->add_option("--step", cf.step);
  continue_cmd->add_option("--max-step", cf.max_step);
  continue_cmd->add_option("--froude-cap", cf.froude_cap);
  continue_cmd->add_option("--stagnation-frac", cf.stagnation_fraction);
  continue_cmd->add_option("--np", cf.np);
  continue_cmd->add_option("--nq", cf.nq);
  continue_cmd->add_option("--domain-factor", cf.domain_factor);
  continue_cmd->add_option("--seed-r", cf.seed_r);
  continue_cmd->add_option("--direction", cf.direction);

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (!g.config_path.empty())
      g.config = json::parse(read_text_file(g.config_path));
    fs::create_directories(g.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  }

  ManifestWriter manifest;
  manifest.opts = &g;
  for (int k = 0; k < argc; ++k) manifest.argv_snapshot.push_back(argv[k]);

  // Apply config defaults where flags were not given.
  if (!solve_cmd->count("--tol"))
    sf.tol = config_get(g.config, "solve", "tol", sf.tol);
  if (!solve_cmd->count("--nq"))
    sf.nq = static_cast<int>(config_get(g.config, "solve", "nq", sf.nq));
  if (!solve_cmd->count("--np"))
    sf.np = static_cast<int>(config_get(g.config, "solve", "np", sf.np));
  if (!solve_cmd->count("--max-iters"))
    sf.max_iters = static_cast<int>(
        config_get(g.config, "solve", "max_iters", sf.max_iters));
  if (!solve_cmd->count("--sigma"))
    sf.sigma = config_get(g.config, "solve", "sigma", sf.sigma);
  if (!solve_cmd->count("--seed-r"))
    sf.seed_r = config_get(g.config, "solve", "seed_r", sf.seed_r);
  if (!solve_cmd->count("--domain-factor"))
    sf.domain_factor =
        config_get(g.config, "solve", "domain_factor", sf.domain_factor);
  if (!solve_cmd->count("--L"))
    sf.half_length = config_get(g.config, "solve", "L", sf.half_length);

  int rc = kExitInput;
  try {
    if (*shear_cmd) {
      manifest.command = "shear";
      rc = cmd_shear(g, profile_path, shear_np, manifest);
    } else if (*sturm_cmd) {
      manifest.command = "sturm";
      rc = cmd_sturm(g, profile_path, sturm_np, n_eigs, manifest);
    } else if (*solve_cmd) {
      manifest.command = "solve";
      rc = cmd_solve(g, profile_path, sf, manifest);
    } else if (*verify_cmd) {
      manifest.command = "verify";
      rc = cmd_verify(g, wave_paths, manifest);
    } else if (*continue_cmd) {
      manifest.command = "continue";
      rc = cmd_continue(g, ustar_path, cf, manifest);
    }
  } catch (const NormalizationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = kExitInput;
  } catch (const InvalidProfileError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = kExitInput;
  } catch (const VersionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = kExitInput;
  } catch (const ChecksumError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = kExitInput;
  } catch (const InvariantError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = kExitInput;
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = kExitSolver;
  }

  try {
    manifest.write();
  } catch (const std::exception& e) {
    std::cerr << "warning: manifest not written: " << e.what() << "\n";
  }
  return rc;
}
