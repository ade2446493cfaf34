#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>
#include <vector>

#include "flocksim/config_text.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/field_io.hpp"
#include "flocksim/kernel.hpp"
#include "flocksim/run_io.hpp"
#include "flocksim/sweep.hpp"
#include "flocksim/verify.hpp"
#include "flocksim/version.hpp"

namespace fs = std::filesystem;
using namespace flocksim;

namespace {

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::string cur;
  std::istringstream is(csv);
  while (std::getline(is, cur, ',')) {
    if (!cur.empty()) out.push_back(parse_double(cur));
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool seed_given, std::uint64_t seed) {
  SimConfig cfg = parse_config_file(config_path);
  if (seed_given) cfg.seed = seed;
  const RunArtifacts art = write_run_directory(cfg, out_dir);
  if (art.exit_code != 0) {
    std::cerr << "run aborted: " << art.result.abort_reason << "\n";
  }
  std::cout << "run: " << art.result.frames.size() << " frames -> " << out_dir
            << "\n";
  return art.exit_code;
}

int cmd_kernel(double alpha, int dim, int n, const std::string& table_path) {
  auto grid = TorusGrid::create(dim, n);
  KernelSpec spec(alpha, grid, 20);
  std::cout << "quantity,value\n";
  std::cout << "phi_min," << format_double(spec.phi_min()) << "\n";
  std::cout << "c," << format_double(spec.norm_const()) << "\n";
  if (!table_path.empty()) {
    // (|k|, lambda) pairs, one row per distinct radius.
    std::map<long long, double> rows;  // key: round(|k|^2 * 2) for exactness
    const auto mult = spec.multiplier();
    for (std::size_t m = 0; m < mult.size(); ++m) {
      int k1 = 0, k2 = 0;
      grid->mode_wavenumbers(m, &k1, &k2);
      const long long r2 = static_cast<long long>(k1) * k1 +
                           static_cast<long long>(k2) * k2;
      rows.emplace(r2, mult[m]);
    }
    std::ofstream os(table_path);
    if (!os) throw ConfigError("cannot write " + table_path);
    os << "k_abs,lambda\n";
    for (const auto& [r2, lam] : rows) {
      os << format_double(std::sqrt(static_cast<double>(r2))) << ','
         << format_double(lam) << "\n";
    }
    std::cout << "table," << table_path << "\n";
  }
  return 0;
}

int cmd_flock(const std::string& run_dir, const std::string& out_dir) {
  const FlockArtifacts art = write_flock_outputs(run_dir, out_dir);
  std::cout << "flock: extracted at t=" << format_double(art.extraction.flock.extracted_at)
            << " cauchy_tail=" << format_double(art.extraction.flock.cauchy_tail)
            << " delta=" << format_double(art.tail_fit.rate) << " -> " << out_dir
            << "\n";
  return 0;
}

int cmd_stability(const std::string& base_path, const std::string& eps_csv,
                  const std::string& config_path, const std::string& out_dir,
                  int threads, bool seed_given, std::uint64_t seed) {
  SimConfig cfg = parse_config_file(config_path);
  if (seed_given) cfg.seed = seed;
  const FlockState base = load_flock(base_path);
  const std::vector<double> eps = parse_list(eps_csv);
  const std::string started = utc_now_string();
  const StabilityResult result = stability_experiment(base, eps, cfg, threads);
  fs::create_directories(out_dir);
  write_stability_csv((fs::path(out_dir) / "stability.csv").string(), result);
  write_manifest(out_dir, "stability", &cfg, 0, started, utc_now_string(),
                 {"file = stability.csv", "base = " + base_path});
  std::cout << "stability: theta=" << format_double(result.fitted_theta)
            << " C=" << format_double(result.reported_c) << " -> " << out_dir
            << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::string& values_csv, const std::string& out_dir,
              int threads, bool seed_given, std::uint64_t seed) {
  SimConfig cfg = parse_config_file(config_path);
  if (seed_given) cfg.seed = seed;
  const std::vector<double> values = parse_list(values_csv);
  const SweepSummary summary = sweep(cfg, axis, values, out_dir, threads);
  int failures = 0;
  for (const auto& row : summary.rows) {
    if (row.exit_status != 0) ++failures;
  }
  std::cout << "sweep: " << summary.rows.size() << " runs, " << failures
            << " failed -> " << out_dir << "\n";
  return 0;
}

int cmd_verify(const std::string& level) {
  VerifyLevel lv;
  if (level == "fast") {
    lv = VerifyLevel::fast;
  } else if (level == "full") {
    lv = VerifyLevel::full;
  } else {
    throw ConfigError("verify level must be fast or full");
  }
  const VerifyReport report = verify(lv);
  std::cout << format_report(report);
  return report.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flocksim: fractional Euler-alignment flocking simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Override the config RNG seed");
  app.add_option("--threads", threads, "Worker threads for sweeps");

  auto* c_run = app.add_subcommand("run", "Integrate a configuration");
  std::string run_config;
  c_run->add_option("--config", run_config, "Config file")->required();

  auto* c_kernel = app.add_subcommand("kernel", "Dump kernel multiplier data");
  double k_alpha = 1.0;
  int k_dim = 1;
  int k_n = 128;
  std::string k_table;
  c_kernel->add_option("--alpha", k_alpha, "Kernel exponent in (0,2)")->required();
  c_kernel->add_option("--dim", k_dim, "Spatial dimension (1 or 2)")->required();
  c_kernel->add_option("--n", k_n, "Grid points per dimension");
  c_kernel->add_option("--table", k_table, "Write (|k|, lambda) CSV here");

  auto* c_flock = app.add_subcommand("flock", "Extract the limiting flock profile");
  std::string flock_run_dir;
  c_flock->add_option("--run-dir", flock_run_dir, "Run directory")->required();

  auto* c_stab = app.add_subcommand("stability", "Perturbation sweep around a flock");
  std::string stab_base, stab_eps, stab_config;
  c_stab->add_option("--base", stab_base, "flock.dat of the base profile")->required();
  c_stab->add_option("--eps", stab_eps, "Comma-separated perturbation sizes")
      ->required();
  c_stab->add_option("--config", stab_config, "Config file")->required();

  auto* c_sweep = app.add_subcommand("sweep", "One run per value of a config key");
  std::string sw_config, sw_axis, sw_values;
  c_sweep->add_option("--config", sw_config, "Template config file")->required();
  c_sweep->add_option("--axis", sw_axis, "Config key to sweep")->required();
  c_sweep->add_option("--values", sw_values, "Comma-separated values")->required();

  auto* c_verify = app.add_subcommand("verify", "Run the numerical self-checks");
  std::string verify_level = "fast";
  c_verify->add_option("--level", verify_level, "fast or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const bool seed_given = seed_opt->count() > 0;
    if (c_run->parsed()) return cmd_run(run_config, out_dir, seed_given, seed);
    if (c_kernel->parsed()) return cmd_kernel(k_alpha, k_dim, k_n, k_table);
    if (c_flock->parsed()) {
      return cmd_flock(flock_run_dir, out_dir == "." ? flock_run_dir : out_dir);
    }
    if (c_stab->parsed()) {
      return cmd_stability(stab_base, stab_eps, stab_config, out_dir, threads,
                           seed_given, seed);
    }
    if (c_sweep->parsed()) {
      return cmd_sweep(sw_config, sw_axis, sw_values, out_dir, threads, seed_given,
                       seed);
    }
    if (c_verify->parsed()) return cmd_verify(verify_level);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const SolverAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 2;
  } catch (const NotFlocked& e) {
    std::cerr << "not flocked: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
