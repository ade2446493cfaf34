#include "flocksim/flocking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "flocksim/errors.hpp"

namespace flocksim {

ScalarField shifted_density(const State& s, const std::vector<double>& u_bar) {
  std::vector<double> v(u_bar.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.t * u_bar[i];
  return translate(s.rho, v);
}

FlockExtraction flock_limit(const RunResult& run) {
  if (run.aborted) throw NotFlocked("run aborted: " + run.abort_reason);
  if (run.frames.size() < 2) throw NotFlocked("trajectory has fewer than 2 frames");

  const State& first = run.frames.front();
  const State& last = run.frames.back();
  const Conserved cons = conserved(first);
  std::vector<double> u_bar(cons.mean_velocity.begin(),
                            cons.mean_velocity.begin() + first.u.dim());

  const double a0 = amplitude(first);
  const double a_end = amplitude(last);
  const double u_scale = std::max(1.0, first.u.max_norm());
  const bool started_flocked = a0 <= 1e-13 * u_scale;
  if (!started_flocked && a_end >= 1e-6 * a0) {
    throw NotFlocked("amplitude has not decayed by 1e6; run longer");
  }

  // Cauchy tail over the last quarter of the run.
  const std::size_t nframes = run.frames.size();
  const std::size_t tail_start = nframes - std::max<std::size_t>(2, nframes / 4);
  std::vector<double> tail_times, tail_values;
  ScalarField prev = shifted_density(run.frames[tail_start], u_bar);
  const double noise_floor = 1e-13 * std::max(1.0, prev.max_abs());
  double prev_tail = std::numeric_limits<double>::infinity();
  for (std::size_t j = tail_start + 1; j < nframes; ++j) {
    ScalarField cur = shifted_density(run.frames[j], u_bar);
    const double tail = sub(cur, prev).max_abs();
    if (prev_tail > noise_floor && tail > prev_tail * (1.0 + 1e-6) &&
        tail > noise_floor) {
      throw NotFlocked("Cauchy tail not decreasing; run longer");
    }
    tail_times.push_back(run.frames[j].t);
    tail_values.push_back(tail);
    prev_tail = tail;
    prev = std::move(cur);
  }

  // Phase shifts do not touch mode 0, so mass must match the run exactly.
  const double cell = std::pow(prev.grid().spacing(), prev.grid().dim());
  double mass = 0.0;
  for (double v : prev.values()) mass += v;
  mass *= cell;
  if (std::abs(mass - cons.mass) > 1e-8 * std::abs(cons.mass)) {
    throw std::runtime_error("flock profile mass drifted from the run mass");
  }
  const double cauchy_tail = tail_values.back();
  return FlockExtraction{FlockState{std::move(prev), u_bar, last.t, cauchy_tail},
                         std::move(tail_times), std::move(tail_values)};
}

std::pair<double, double> flock_distance(const State& s, const FlockState& f) {
  std::vector<double> back(f.u_bar.size());
  for (std::size_t i = 0; i < back.size(); ++i) back[i] = -s.t * f.u_bar[i];
  const ScalarField wave = translate(f.rho_inf, back);
  const double d_inf = sub(s.rho, wave).max_abs();

  const VectorField g_rho = gradient(s.rho);
  const VectorField g_wave = gradient(wave);
  const std::size_t nodes = s.rho.grid().node_count();
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double d2 = 0.0;
    for (int a = 0; a < g_rho.dim(); ++a) {
      const double d = g_rho.component(a)[i] - g_wave.component(a)[i];
      d2 += d * d;
    }
    worst = std::max(worst, d2);
  }
  return {d_inf, d_inf + std::sqrt(worst)};
}

StabilityResult stability_experiment(const FlockState& base,
                                     std::span<const double> eps_list,
                                     const SimConfig& cfg, int threads) {
  if (eps_list.empty()) throw ConfigError("stability sweep needs at least one eps");
  SimContext ctx = make_context(cfg);
  if (!ctx.grid->same_layout(base.rho_inf.grid())) {
    throw ConfigError("base flock grid does not match config grid");
  }

  // One perturbation shape per field, drawn once and scaled per eps, so the
  // sweep probes a single direction at decreasing size.
  std::mt19937_64 eng(cfg.seed);
  auto normalized = [&](ScalarField f) {
    const double m = f.max_abs();
    return m == 0.0 ? f : scale(f, 1.0 / m);
  };
  const ScalarField rho_shape =
      normalized(random_band_limited(ctx.grid, cfg.init_k0, eng));
  std::vector<ScalarField> u_shapes;
  for (int c = 0; c < cfg.dim; ++c) {
    u_shapes.push_back(normalized(random_band_limited(ctx.grid, cfg.init_k0, eng)));
  }

  StabilityResult result;
  result.rows.resize(eps_list.size());
  std::vector<std::string> failures(eps_list.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= eps_list.size()) return;
      const double eps = eps_list[i];
      try {
        std::vector<ScalarField> comps;
        for (int c = 0; c < cfg.dim; ++c) {
          comps.push_back(add_scaled(
              ScalarField::constant(ctx.grid, base.u_bar[static_cast<std::size_t>(c)]),
              eps, u_shapes[static_cast<std::size_t>(c)]));
        }
        State start{add_scaled(base.rho_inf, eps, rho_shape),
                    VectorField(std::move(comps)), 0.0};
        StabilityRow row;
        row.eps = eps;
        row.a0 = amplitude(start);
        const RunResult member = run(cfg, nullptr, &start);
        const FlockExtraction ext = flock_limit(member);
        row.dist_inf = sub(ext.flock.rho_inf, base.rho_inf).max_abs();
        result.rows[i] = row;
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  const int nw = std::max(1, std::min<int>(threads, static_cast<int>(eps_list.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!failures[i].empty()) {
      throw NotFlocked("stability member eps=" + std::to_string(eps_list[i]) +
                       " failed to flock: " + failures[i]);
    }
  }

  double c_rep = 0.0;
  std::vector<double> log_eps, log_dist;
  for (const auto& row : result.rows) {
    if (row.eps > 0.0) {
      c_rep = std::max(c_rep, row.dist_inf / row.eps);
      if (row.dist_inf > 1e-14) {
        log_eps.push_back(std::log(row.eps));
        log_dist.push_back(std::log(row.dist_inf));
      }
    }
  }
  result.reported_c = c_rep;
  if (log_eps.size() >= 2) {
    const double n = static_cast<double>(log_eps.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_eps.size(); ++i) {
      sx += log_eps[i];
      sy += log_dist[i];
      sxx += log_eps[i] * log_eps[i];
      sxy += log_eps[i] * log_dist[i];
    }
    result.fitted_theta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return result;
}

}  // namespace flocksim
