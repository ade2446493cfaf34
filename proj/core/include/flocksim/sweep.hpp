#pragma once

#include <span>
#include <string>
#include <vector>

#include "flocksim/sim_config.hpp"

namespace flocksim {

struct SweepRow {
  double value = 0.0;
  double final_a = 0.0;
  double delta_fit = 0.0;       // fitted amplitude decay rate (NaN if unfittable)
  double flock_dist_inf = 0.0;  // distance of the penultimate frame (NaN if not flocked)
  int exit_status = 0;
  std::string dir;
};

struct SweepSummary {
  std::string axis;
  std::vector<SweepRow> rows;  // in the order of `values`
};

/// One run directory per axis value under out_dir, executed by a pool of
/// `threads` workers; individual failures are recorded in the row's exit
/// status and the sweep continues. Writes sweep_summary.csv and a manifest.
SweepSummary sweep(const SimConfig& base, const std::string& axis_key,
                   std::span<const double> values, const std::string& out_dir,
                   int threads = 1);

}  // namespace flocksim
