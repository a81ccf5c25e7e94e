/// Persistence: wave files (canonical JSON with a content checksum and
/// 17-significant-digit floats, written atomically), append-only branch
/// logs, and import of externally produced physical-variable fields.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "solwave/continuation.hpp"
#include "solwave/wavesolve.hpp"

namespace solwave {

class IoError : public Error {
 public:
  using Error::Error;
};
class ChecksumError : public Error {
 public:
  using Error::Error;
};
class VersionError : public Error {
 public:
  using Error::Error;
};
class InvariantError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kWaveFormatVersion = 1;

/// Canonical serialization: sorted keys, no whitespace, floats as %.17g.
/// The checksum is FNV-1a 64 over exactly these bytes.
std::string canonicalize_json_text(const std::string& text);
std::string payload_checksum(const std::string& canonical_payload);

/// Writes the wave file (temp + rename); returns the content checksum.
std::string write_wave(const WaveSolution& sol,
                       const std::filesystem::path& path);

/// Reads and fully validates a wave file: version, checksum, stored-state
/// consistency, and the height-field invariants (bed row zero, min h_p > 0).
/// Externally produced physical-variable files are converted on the fly.
WaveSolution read_wave(const std::filesystem::path& path);

struct LoadedWave {
  WaveSolution solution;
  bool quarantined = false;
  std::string quarantine_reason;
  double conversion_residual = 0.0;  // physical imports only
};

/// Like read_wave but keeps invariant-violating fields loadable for
/// audit-only inspection instead of throwing InvariantError.
LoadedWave read_wave_audit(const std::filesystem::path& path);

/// One line per converged branch point; h fields live in side files named by
/// their checksum under `side_dir`.
struct BranchLogEntry {
  int index = 0;
  double froude = 0.0;
  double amplitude = 0.0;
  double max_eta = 0.0;
  double sup_u_over_c = 0.0;
  double min_hp = 0.0;
  double arclength = 0.0;
  std::string wave_checksum;
  std::string wave_file;
};

void append_branch_entry(const std::filesystem::path& log_path,
                         const BranchLogEntry& entry);

/// Recovers all complete entries; a truncated trailing line is ignored.
std::vector<BranchLogEntry> read_branch_log(
    const std::filesystem::path& log_path);

/// Writes the branch: one side wave file per point plus the log.
void write_branch(const ContinuationBranch& branch,
                  const std::filesystem::path& log_path,
                  const std::filesystem::path& side_dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content);

}  // namespace solwave
