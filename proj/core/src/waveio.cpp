#include "solwave/waveio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace solwave {

namespace {

using nlohmann::json;

void canonical_dump(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        canonical_dump(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        canonical_dump(v, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v))
        throw IoError("canonical JSON cannot hold non-finite numbers");
      out += num::format_g17(v);
      break;
    }
    default:
      out += j.dump();
      break;
  }
}

std::string canonical_dump(const json& j) {
  std::string out;
  canonical_dump(j, out);
  return out;
}

json parse_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError("failed to parse " + path.string() + ": " + e.what());
  }
}

json grid_to_json(const StripGrid& g) {
  return json{{"L", g.half_length},
              {"nq", g.nq},
              {"np", g.np},
              {"symmetric_half", g.symmetric_half},
              {"m", g.strip_depth}};
}

StripGrid grid_from_json(const json& j) {
  const double L = j.at("L").get<double>();
  const int nq = j.at("nq").get<int>();
  const int np = j.at("np").get<int>();
  const double m = j.at("m").get<double>();
  return j.at("symmetric_half").get<bool>() ? StripGrid::half(L, nq, np, m)
                                            : StripGrid::full(L, nq, np, m);
}

json build_payload(const WaveSolution& sol) {
  json payload;
  payload["kind"] = "height";
  payload["profile"] = json::parse(profile_to_json_text(sol.state.profile));
  payload["grid"] = grid_to_json(sol.field.grid);
  payload["h"] = sol.field.h;  // row-major, q-major order
  payload["sigma"] = sol.sigma;
  payload["state"] = json{{"np", sol.state.np},
                          {"m", sol.state.flux},
                          {"F", sol.state.froude},
                          {"Lambda", sol.state.lambda_ratio},
                          {"lambda", sol.state.bernoulli_const}};
  payload["solver"] = json{{"tol", sol.tolerance},
                           {"iterations", sol.newton_iters},
                           {"residual_norm", sol.residual_norm},
                           {"converged", sol.converged}};
  return payload;
}

struct ParsedFile {
  json payload;
  std::string canonical;
  std::string checksum;
};

ParsedFile verify_envelope(const std::filesystem::path& path) {
  const json file = parse_file(path);
  if (!file.contains("format_version"))
    throw VersionError(path.string() + ": missing format_version");
  const int version = file.at("format_version").get<int>();
  if (version != kWaveFormatVersion) {
    std::ostringstream os;
    os << path.string() << ": unsupported format_version " << version
       << " (supported: " << kWaveFormatVersion << ")";
    throw VersionError(os.str());
  }
  ParsedFile out;
  out.payload = file.at("payload");
  out.canonical = canonical_dump(out.payload);
  out.checksum = payload_checksum(out.canonical);
  const std::string stored = file.at("checksum").get<std::string>();
  if (stored != out.checksum)
    throw ChecksumError(path.string() + ": checksum mismatch (stored " +
                        stored + ", payload hashes to " + out.checksum + ")");
  return out;
}

// Rebuild a WaveSolution from a height payload. Invariant violations are
// reported through `quarantine` instead of exceptions.
WaveSolution solution_from_height_payload(const json& payload,
                                          std::string* quarantine) {
  WaveSolution sol;
  ShearProfile profile =
      profile_from_json_text(payload.at("profile").dump());
  const StripGrid grid = grid_from_json(payload.at("grid"));
  const int state_np = payload.at("state").at("np").get<int>();
  sol.state = build_asymptotic_state(profile, state_np);
  sol.field.grid = grid;
  sol.field.h = payload.at("h").get<std::vector<double>>();
  if (static_cast<int>(sol.field.h.size()) != grid.size())
    throw IoError("wave payload: h has wrong length");
  sol.sigma = payload.at("sigma").get<double>();
  const auto& solver = payload.at("solver");
  sol.tolerance = solver.at("tol").get<double>();
  sol.newton_iters = solver.at("iterations").get<int>();
  sol.residual_norm = solver.at("residual_norm").get<double>();
  sol.converged = solver.at("converged").get<bool>();
  sol.status = sol.converged ? SolveStatus::Converged
                             : SolveStatus::IterationCap;
  sol.message = "loaded from file";

  const auto& st = payload.at("state");
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
  };
  if (!close(st.at("m").get<double>(), sol.state.flux) ||
      !close(st.at("F").get<double>(), sol.state.froude) ||
      !close(st.at("lambda").get<double>(), sol.state.bernoulli_const))
    throw InvariantError(
        "stored state scalars disagree with the profile-derived state");

  const int N = grid.np - 1;
  sol.amplitude = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.nq; ++j)
    sol.amplitude =
        std::max(sol.amplitude, sol.field.at(j, N) - profile.d);

  std::string reason;
  for (int j = 0; j < grid.nq && reason.empty(); ++j)
    if (std::abs(sol.field.at(j, 0)) > 1e-13 * profile.d)
      reason = "bed row of h is not zero";
  if (reason.empty() && !(sol.field.min_hp() > 0.0))
    reason = "min h_p <= 0";
  if (!reason.empty()) {
    if (quarantine == nullptr) throw InvariantError("wave file invalid: " + reason);
    *quarantine = reason;
  }
  return sol;
}

// Physical-variable import: u on per-column uniform sections between the bed
// and the surface; h is rebuilt by integrating c - u in y and inverting the
// resulting stream-function coordinate onto the target p-grid.
WaveSolution solution_from_physical_payload(const json& payload,
                                            double* conversion_residual) {
  ShearProfile profile =
      profile_from_json_text(payload.at("profile").dump());
  const auto x = payload.at("x").get<std::vector<double>>();
  const auto eta = payload.at("eta").get<std::vector<double>>();
  const auto u_cols = payload.at("u").get<std::vector<std::vector<double>>>();
  const double sigma =
      payload.contains("sigma") ? payload.at("sigma").get<double>() : 0.0;
  if (x.size() < 8 || x.size() != eta.size() || x.size() != u_cols.size())
    throw IoError("physical payload: x/eta/u sizes disagree");
  const std::size_t ns = u_cols.front().size();
  for (const auto& col : u_cols)
    if (col.size() != ns || ns < 8)
      throw IoError("physical payload: ragged or too-short u columns");

  const double dq = x[1] - x[0];
  for (std::size_t j = 1; j < x.size(); ++j)
    if (std::abs((x[j] - x[j - 1]) - dq) > 1e-9 * dq)
      throw IoError("physical payload: x grid must be uniform");
  const bool half = x.front() >= -1e-12 * profile.d;
  const double L = std::max(std::abs(x.front()), std::abs(x.back()));

  // Column-wise stream-function coordinate and flux.
  const std::size_t nq = x.size();
  std::vector<std::vector<double>> p_cols(nq), y_cols(nq);
  double flux = 0.0;
  for (std::size_t j = 0; j < nq; ++j) {
    const double depth = eta[j] + profile.d;
    const double dy = depth / (ns - 1);
    std::vector<double> w(ns);
    std::vector<double>& ys = y_cols[j];
    ys.resize(ns);
    for (std::size_t k = 0; k < ns; ++k) {
      ys[k] = -profile.d + depth * static_cast<double>(k) / (ns - 1);
      w[k] = profile.c - u_cols[j][k];
      if (!(w[k] > 0.0))
        throw InvariantError("physical payload: u >= c inside the fluid");
    }
    p_cols[j] = num::cumulative_integral(w, dy);
    flux += p_cols[j].back();
  }
  flux /= static_cast<double>(nq);
  for (std::size_t j = 0; j < nq; ++j)
    for (auto& v : p_cols[j]) v -= p_cols[j].back();  // p in [-m_j, 0]

  const int np = static_cast<int>(ns);
  AsymptoticState state = build_asymptotic_state(profile, np);
  StripGrid grid = half ? StripGrid::half(L, static_cast<int>(nq), np, state.flux)
                        : StripGrid::full(L, static_cast<int>(nq), np, state.flux);

  WaveSolution sol;
  sol.state = state;
  sol.sigma = sigma;
  sol.field.grid = grid;
  sol.field.h.assign(static_cast<std::size_t>(grid.size()), 0.0);
  for (std::size_t j = 0; j < nq; ++j) {
    num::PchipSpline y_of_p(p_cols[j], y_cols[j]);
    for (int i = 0; i < np; ++i) {
      const double target = grid.p(i);
      double y = y_of_p(std::max(target, p_cols[j].front()));
      if (i == 0) y = -profile.d;
      if (i == np - 1) y = eta[j];
      sol.field.at(static_cast<int>(j), i) = y + profile.d;
    }
  }

  // Cross-check the conversion: 1/h_p must reproduce c - u, and the
  // column-integrated flux must match the profile-derived one.
  double worst = std::abs(flux - state.flux) / state.flux;
  const double dp = grid.dp;
  for (std::size_t j = 0; j < nq; ++j) {
    num::PchipSpline u_of_y(y_cols[j], u_cols[j]);
    for (int i = 1; i + 1 < np; ++i) {
      const double hp = (sol.field.at(static_cast<int>(j), i + 1) -
                         sol.field.at(static_cast<int>(j), i - 1)) /
                        (2.0 * dp);
      const double y = sol.field.at(static_cast<int>(j), i) - profile.d;
      const double w = profile.c - u_of_y(y);
      worst = std::max(worst, std::abs(1.0 / hp - w) / w);
    }
  }
  if (conversion_residual != nullptr) *conversion_residual = worst;

  sol.converged = false;
  sol.status = SolveStatus::IterationCap;
  sol.newton_iters = 0;
  sol.tolerance = 0.0;
  sol.residual_norm =
      residual_norm(residual(sol.field, sol.state, sigma), sol.state);
  sol.message = "imported from physical-variable file";
  const int N = grid.np - 1;
  sol.amplitude = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.nq; ++j)
    sol.amplitude = std::max(sol.amplitude, sol.field.at(j, N) - profile.d);
  return sol;
}

}  // namespace

std::string canonicalize_json_text(const std::string& text) {
  return canonical_dump(json::parse(text));
}

std::string payload_checksum(const std::string& canonical_payload) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(num::fnv1a64(
                    std::span<const char>(canonical_payload.data(),
                                          canonical_payload.size()))));
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("atomic rename " + tmp.string() + " -> " + path.string() +
                  " failed: " + ec.message());
}

std::string write_wave(const WaveSolution& sol,
                       const std::filesystem::path& path) {
  const json payload = build_payload(sol);
  const std::string canonical = canonical_dump(payload);
  const std::string checksum = payload_checksum(canonical);
  std::string file = "{\"checksum\":\"" + checksum +
                     "\",\"format_version\":" +
                     std::to_string(kWaveFormatVersion) +
                     ",\"payload\":" + canonical + "}\n";
  write_text_file_atomic(path, file);
  return checksum;
}

WaveSolution read_wave(const std::filesystem::path& path) {
  ParsedFile pf = verify_envelope(path);
  const std::string kind = pf.payload.value("kind", "height");
  if (kind == "physical")
    return solution_from_physical_payload(pf.payload, nullptr);
  return solution_from_height_payload(pf.payload, nullptr);
}

LoadedWave read_wave_audit(const std::filesystem::path& path) {
  ParsedFile pf = verify_envelope(path);
  LoadedWave out;
  const std::string kind = pf.payload.value("kind", "height");
  if (kind == "physical") {
    out.solution =
        solution_from_physical_payload(pf.payload, &out.conversion_residual);
    return out;
  }
  std::string reason;
  out.solution = solution_from_height_payload(pf.payload, &reason);
  out.quarantined = !reason.empty();
  out.quarantine_reason = reason;
  return out;
}

void append_branch_entry(const std::filesystem::path& log_path,
                         const BranchLogEntry& entry) {
  json j{{"index", entry.index},
         {"froude", entry.froude},
         {"amplitude", entry.amplitude},
         {"max_eta", entry.max_eta},
         {"sup_u_over_c", entry.sup_u_over_c},
         {"min_hp", entry.min_hp},
         {"arclength", entry.arclength},
         {"wave_checksum", entry.wave_checksum},
         {"wave_file", entry.wave_file}};
  std::ofstream out(log_path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + log_path.string() + " for append");
  out << canonical_dump(j) << '\n';
  out.flush();
  if (!out) throw IoError("append failed for " + log_path.string());
}

std::vector<BranchLogEntry> read_branch_log(
    const std::filesystem::path& log_path) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + log_path.string() + " for reading");
  std::vector<BranchLogEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      if (in.eof()) break;  // truncated trailing line: keep what we have
      throw IoError("corrupt branch log line in " + log_path.string());
    }
    BranchLogEntry e;
    e.index = j.at("index").get<int>();
    e.froude = j.at("froude").get<double>();
    e.amplitude = j.at("amplitude").get<double>();
    e.max_eta = j.at("max_eta").get<double>();
    e.sup_u_over_c = j.at("sup_u_over_c").get<double>();
    e.min_hp = j.at("min_hp").get<double>();
    e.arclength = j.at("arclength").get<double>();
    e.wave_checksum = j.at("wave_checksum").get<std::string>();
    e.wave_file = j.at("wave_file").get<std::string>();
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_branch(const ContinuationBranch& branch,
                  const std::filesystem::path& log_path,
                  const std::filesystem::path& side_dir) {
  std::filesystem::create_directories(side_dir);
  std::error_code ec;
  std::filesystem::remove(log_path, ec);
  int index = 0;
  for (const auto& pt : branch.points) {
    BranchLogEntry e;
    e.index = index++;
    e.froude = pt.froude;
    e.amplitude = pt.amplitude;
    e.max_eta = pt.max_eta;
    e.sup_u_over_c = pt.sup_u_over_c;
    e.min_hp = pt.min_hp;
    e.arclength = pt.arclength;
    const std::filesystem::path tmp_name = side_dir / "wave-tmp.json";
    e.wave_checksum = write_wave(*pt.solution, tmp_name);
    const std::string final_name =
        "wave-" + e.wave_checksum.substr(e.wave_checksum.find(':') + 1) +
        ".json";
    std::filesystem::rename(tmp_name, side_dir / final_name);
    e.wave_file = final_name;
    append_branch_entry(log_path, e);
  }
}

}  // namespace solwave
