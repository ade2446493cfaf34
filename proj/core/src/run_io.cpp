#include "flocksim/run_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flocksim/config_text.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/field_io.hpp"
#include "flocksim/version.hpp"

namespace fs = std::filesystem;

namespace flocksim {

std::string diagnostics_csv_header(int dim) {
  std::string h = "t,mass,p1";
  if (dim == 2) h += ",p2";
  h += ",ubar1";
  if (dim == 2) h += ",ubar2";
  h += ",amplitude,rho_min,rho_max,e_inf,e_lip,u_c1,u_c2,u_c2g,flock_dist_inf,flock_dist_c1";
  return h;
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r, int dim) {
  std::ostringstream os;
  os << format_double(r.t) << ',' << format_double(r.mass) << ','
     << format_double(r.momentum[0]);
  if (dim == 2) os << ',' << format_double(r.momentum[1]);
  os << ',' << format_double(r.mean_velocity[0]);
  if (dim == 2) os << ',' << format_double(r.mean_velocity[1]);
  os << ',' << format_double(r.amplitude) << ',' << format_double(r.rho_min) << ','
     << format_double(r.rho_max) << ',' << format_double(r.e_inf) << ','
     << format_double(r.e_lip) << ',' << format_double(r.u_c1) << ','
     << format_double(r.u_c2) << ',' << format_double(r.u_c2g) << ','
     << format_double(r.flock_dist_inf) << ',' << format_double(r.flock_dist_c1);
  return os.str();
}

std::string utc_now_string() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& dir, const std::string& command,
                    const SimConfig* cfg, int exit_status,
                    const std::string& started_utc, const std::string& finished_utc,
                    const std::vector<std::string>& extra) {
  const fs::path path = fs::path(dir) / "manifest.txt";
  if (fs::exists(path)) {
    throw ConfigError("output directory already holds a manifest: " + path.string());
  }
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write manifest: " + path.string());
  os << "# flocksim manifest\n";
  os << "version = " << kVersion << "\n";
  os << "command = " << command << "\n";
  os << "rng_algorithm = mt19937_64+u53\n";
  os << "started_utc = " << started_utc << "\n";
  os << "finished_utc = " << finished_utc << "\n";
  os << "exit_status = " << exit_status << "\n";
  if (cfg != nullptr) {
    std::istringstream cfg_lines(serialize_config(*cfg));
    std::string line;
    while (std::getline(cfg_lines, line)) os << "config." << line << "\n";
  }
  for (const auto& e : extra) os << e << "\n";
}

namespace {

std::string checkpoint_name(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "field_%.9g.dat", t);
  return buf;
}

void write_state_file(const fs::path& path, const State& s) {
  std::vector<std::pair<std::string, const ScalarField*>> blocks;
  blocks.emplace_back("rho", &s.rho);
  blocks.emplace_back("u1", &s.u.component(0));
  if (s.u.dim() == 2) blocks.emplace_back("u2", &s.u.component(1));
  write_field_file(path.string(), blocks, s.t);
}

void write_diagnostics_csv(const fs::path& path, const RunResult& result) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << diagnostics_csv_header(result.cfg.dim) << "\n";
  for (const auto& rec : result.records) {
    os << diagnostics_csv_row(rec, result.cfg.dim) << "\n";
  }
}

}  // namespace

RunArtifacts write_run_directory(const SimConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  if (fs::exists(dir / "manifest.txt")) {
    throw ConfigError("output directory already contains a run: " + out_dir);
  }
  const std::string started = utc_now_string();

  std::vector<std::string> inventory;
  std::ofstream csv(dir / "diagnostics.csv");
  if (!csv) throw ConfigError("cannot write diagnostics.csv in " + out_dir);
  csv << diagnostics_csv_header(cfg.dim) << "\n";
  inventory.push_back("file = diagnostics.csv");

  RunSinks sinks;
  sinks.on_frame = [&](const State& s, const DiagnosticsRecord& rec) {
    const std::string name = checkpoint_name(s.t);
    write_state_file(dir / name, s);
    inventory.push_back("file = " + name);
    csv << diagnostics_csv_row(rec, cfg.dim) << "\n";
    csv.flush();
  };

  RunArtifacts artifacts;
  artifacts.dir = out_dir;
  artifacts.result = run(cfg, &sinks);
  csv.close();

  RunResult& result = artifacts.result;
  artifacts.exit_code = result.aborted ? 2 : 0;

  // Fill the flock-distance columns when the trajectory has converged; the
  // final frame is the extraction frame, so its own distance is zero by
  // construction.
  if (!result.aborted) {
    try {
      const FlockExtraction ext = flock_limit(result);
      for (std::size_t i = 0; i < result.frames.size(); ++i) {
        const auto [d_inf, d_c1] = flock_distance(result.frames[i], ext.flock);
        result.records[i].flock_dist_inf = d_inf;
        result.records[i].flock_dist_c1 = d_c1;
      }
      write_diagnostics_csv(dir / "diagnostics.csv", result);
    } catch (const NotFlocked&) {
      // Short or non-aligning run: columns stay NaN.
    }
  }

  if (!result.frames.empty()) {
    write_state_file(dir / "final_state.dat", result.frames.back());
    inventory.push_back("file = final_state.dat");
  }
  if (result.aborted) {
    inventory.push_back("abort_reason = " + result.abort_reason);
  }
  write_manifest(out_dir, "run", &cfg, artifacts.exit_code, started,
                 utc_now_string(), inventory);
  return artifacts;
}

std::vector<State> load_run_frames(const std::string& run_dir) {
  std::vector<State> frames;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("field_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".dat") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw ConfigError("no field_*.dat checkpoints in " + run_dir);
  }
  for (const auto& path : files) {
    auto blocks = read_field_file(path.string());
    const ScalarField* rho = nullptr;
    const ScalarField* u1 = nullptr;
    const ScalarField* u2 = nullptr;
    double t = 0.0;
    for (const auto& b : blocks) {
      t = b.t;
      if (b.name == "rho") rho = &b.field;
      if (b.name == "u1") u1 = &b.field;
      if (b.name == "u2") u2 = &b.field;
    }
    if (rho == nullptr || u1 == nullptr) {
      throw ConfigError("checkpoint missing rho/u blocks: " + path.string());
    }
    std::vector<ScalarField> comps{*u1};
    if (u2 != nullptr) comps.push_back(*u2);
    frames.push_back(State{*rho, VectorField(std::move(comps)), t});
  }
  std::sort(frames.begin(), frames.end(),
            [](const State& a, const State& b) { return a.t < b.t; });
  return frames;
}

FlockArtifacts write_flock_outputs(const std::string& run_dir,
                                   const std::string& out_dir) {
  const std::string started = utc_now_string();
  RunResult reconstructed;
  reconstructed.frames = load_run_frames(run_dir);
  if (reconstructed.frames.empty()) throw ConfigError("empty run directory");
  reconstructed.cfg.dim = reconstructed.frames.front().rho.grid().dim();
  reconstructed.cfg.n = reconstructed.frames.front().rho.grid().points_per_dim();

  FlockExtraction extraction = flock_limit(reconstructed);
  const auto& times = extraction.tail_times;
  const auto& tails = extraction.tail_values;
  const double t_fit_end = decay_window_end(times, tails);
  const DecayFit tail_fit = decay_fit(times, tails, times.front(), t_fit_end);
  FlockArtifacts art{std::move(extraction), tail_fit};

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_field_file((dir / "flock.dat").string(),
                   {{"rho_inf", &art.extraction.flock.rho_inf}},
                   art.extraction.flock.extracted_at);
  {
    std::ofstream os(dir / "flock_summary.csv");
    if (!os) throw ConfigError("cannot write flock_summary.csv");
    const int dim = art.extraction.flock.rho_inf.grid().dim();
    os << "ubar1";
    if (dim == 2) os << ",ubar2";
    os << ",cauchy_tail,delta\n";
    os << format_double(art.extraction.flock.u_bar[0]);
    if (dim == 2) os << ',' << format_double(art.extraction.flock.u_bar[1]);
    os << ',' << format_double(art.extraction.flock.cauchy_tail) << ','
       << format_double(art.tail_fit.rate) << "\n";
  }
  write_manifest(out_dir, "flock", nullptr, 0, started, utc_now_string(),
                 {"file = flock.dat", "file = flock_summary.csv",
                  "run_dir = " + run_dir});
  return art;
}

FlockState load_flock(const std::string& flock_dat_path) {
  auto blocks = read_field_file(flock_dat_path);
  const FieldBlock* profile = nullptr;
  for (const auto& b : blocks) {
    if (b.name == "rho_inf") profile = &b;
  }
  if (profile == nullptr) {
    throw ConfigError("no rho_inf block in " + flock_dat_path);
  }
  FlockState flock{profile->field, {}, profile->t, 0.0};

  const fs::path summary = fs::path(flock_dat_path).parent_path() / "flock_summary.csv";
  std::ifstream is(summary);
  if (!is) {
    throw ConfigError("flock_summary.csv not found next to " + flock_dat_path);
  }
  std::string header, row;
  if (!std::getline(is, header) || !std::getline(is, row)) {
    throw ConfigError("malformed " + summary.string());
  }
  std::vector<std::string> cols;
  {
    std::istringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) cols.push_back(cell);
  }
  const int dim = profile->field.grid().dim();
  if (static_cast<int>(cols.size()) != dim + 2) {
    throw ConfigError("unexpected column count in " + summary.string());
  }
  for (int c = 0; c < dim; ++c) {
    flock.u_bar.push_back(parse_double(cols[static_cast<std::size_t>(c)]));
  }
  flock.cauchy_tail = parse_double(cols[static_cast<std::size_t>(dim)]);
  return flock;
}

void write_stability_csv(const std::string& path, const StabilityResult& result) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << "eps,dist_inf,A0,fitted_theta\n";
  for (const auto& row : result.rows) {
    os << format_double(row.eps) << ',' << format_double(row.dist_inf) << ','
       << format_double(row.a0) << ',' << format_double(result.fitted_theta) << "\n";
  }
}

}  // namespace flocksim
