#include "flocksim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "flocksim/config_text.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/field_io.hpp"
#include "flocksim/run_io.hpp"

namespace fs = std::filesystem;

namespace flocksim {

namespace {

double fit_amplitude_rate(const RunResult& result) {
  std::vector<double> t, a;
  for (const auto& rec : result.records) {
    t.push_back(rec.t);
    a.push_back(rec.amplitude);
  }
  try {
    const double end = decay_window_end(t, a, 1e-10);
    const DecayFit fit = decay_fit(t, a, 0.15 * end, end);
    return fit.rate;
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double penultimate_flock_distance(const RunResult& result) {
  try {
    const FlockExtraction ext = flock_limit(result);
    if (result.frames.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const State& probe = result.frames[result.frames.size() - 2];
    return flock_distance(probe, ext.flock).first;
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

SweepSummary sweep(const SimConfig& base, const std::string& axis_key,
                   std::span<const double> values, const std::string& out_dir,
                   int threads) {
  if (values.empty()) {
    throw ConfigError("sweep needs a non-empty value list");
  }
  {
    // Reject unknown axis keys before any run starts.
    SimConfig probe = base;
    set_config_key(probe, axis_key, format_double(values[0]));
  }
  fs::create_directories(out_dir);
  const std::string started = utc_now_string();

  SweepSummary summary;
  summary.axis = axis_key;
  summary.rows.resize(values.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      SweepRow row;
      row.value = values[i];
      const std::string dir =
          (fs::path(out_dir) / (axis_key + "_" + format_double(values[i]))).string();
      row.dir = dir;
      try {
        SimConfig cfg = base;
        set_config_key(cfg, axis_key, format_double(values[i]));
        const RunArtifacts art = write_run_directory(cfg, dir);
        row.exit_status = art.exit_code;
        if (!art.result.records.empty()) {
          row.final_a = art.result.records.back().amplitude;
        }
        row.delta_fit = fit_amplitude_rate(art.result);
        row.flock_dist_inf = penultimate_flock_distance(art.result);
      } catch (const std::exception&) {
        row.exit_status = 2;
        row.final_a = std::numeric_limits<double>::quiet_NaN();
        row.delta_fit = std::numeric_limits<double>::quiet_NaN();
        row.flock_dist_inf = std::numeric_limits<double>::quiet_NaN();
      }
      summary.rows[i] = row;
    }
  };

  const int nw = std::max(1, std::min<int>(threads, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  {
    std::ofstream os(fs::path(out_dir) / "sweep_summary.csv");
    if (!os) throw ConfigError("cannot write sweep_summary.csv");
    os << axis_key << ",final_A,delta,flock_dist_inf,exit_status\n";
    for (const auto& row : summary.rows) {
      os << format_double(row.value) << ',' << format_double(row.final_a) << ','
         << format_double(row.delta_fit) << ',' << format_double(row.flock_dist_inf)
         << ',' << row.exit_status << "\n";
    }
  }
  write_manifest(out_dir, "sweep", &base, 0, started, utc_now_string(),
                 {"file = sweep_summary.csv", "axis = " + axis_key});
  return summary;
}

}  // namespace flocksim
