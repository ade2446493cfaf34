#pragma once

#include <string>
#include <vector>

#include "flocksim/diagnostics.hpp"
#include "flocksim/dynamics.hpp"
#include "flocksim/flocking.hpp"

namespace flocksim {

std::string diagnostics_csv_header(int dim);
std::string diagnostics_csv_row(const DiagnosticsRecord& r, int dim);

/// Runs a config and writes the run directory:
///   diagnostics.csv          one row per output frame
///   field_<t>.dat            state checkpoints (FLOCKFIELD v1 blocks)
///   final_state.dat          last accepted state
///   manifest.txt             config echo, version, seed, timings, inventory
/// Checkpoints and CSV rows are streamed as frames complete, so an aborted
/// run still leaves the last good checkpoint and a parseable manifest. When
/// the trajectory has flocked, the CSV is rewritten with the flock-distance
/// columns filled against the extracted profile.
/// Returns the in-memory result; exit code 0 on completion, 2 on abort.
struct RunArtifacts {
  RunResult result;
  int exit_code = 0;
  std::string dir;
};
RunArtifacts write_run_directory(const SimConfig& cfg, const std::string& out_dir);

/// Reloads the state frames of a run directory from its field_*.dat
/// checkpoints (sorted by time; final_state.dat is the last frame).
std::vector<State> load_run_frames(const std::string& run_dir);

/// Flock extraction of a run directory: reads checkpoints, extracts the
/// limiting profile, fits the Cauchy-tail decay rate, and writes flock.dat
/// plus flock_summary.csv (columns ubar1[,ubar2],cauchy_tail,delta).
struct FlockArtifacts {
  FlockExtraction extraction;
  DecayFit tail_fit;
};
FlockArtifacts write_flock_outputs(const std::string& run_dir,
                                   const std::string& out_dir);

/// Loads flock.dat (+ flock_summary.csv alongside it, for ubar) back into a
/// FlockState.
FlockState load_flock(const std::string& flock_dat_path);

/// Writes stability.csv with columns eps,dist_inf,A0,fitted_theta (the
/// fitted slope is a sweep-level quantity, repeated per row).
void write_stability_csv(const std::string& path, const StabilityResult& result);

/// Writes the write-once run manifest. `extra` lines are appended verbatim
/// after the config echo (used for inventory `file = ...` entries).
void write_manifest(const std::string& dir, const std::string& command,
                    const SimConfig* cfg, int exit_status,
                    const std::string& started_utc, const std::string& finished_utc,
                    const std::vector<std::string>& extra);

std::string utc_now_string();

}  // namespace flocksim
