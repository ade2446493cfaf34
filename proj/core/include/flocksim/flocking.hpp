#pragma once

#include <span>
#include <utility>
#include <vector>

#include "flocksim/dynamics.hpp"

namespace flocksim {

/// Limiting traveling-wave profile of a converged run, in shifted coordinates
/// (x + t ubar), together with the observed Cauchy tail that certifies the
/// extraction error.
struct FlockState {
  ScalarField rho_inf;
  std::vector<double> u_bar;
  double extracted_at = 0.0;
  double cauchy_tail = 0.0;
};

/// rho(x + t ubar, t): undoes the mean drift via a spectral phase shift.
ScalarField shifted_density(const State& s, const std::vector<double>& u_bar);

struct FlockExtraction {
  FlockState flock;
  /// Sup-differences of consecutive shifted frames over the last quarter of
  /// the run: tail_values[i] = |rho~(t_{i+1}) - rho~(t_i)|_inf at tail_times[i].
  std::vector<double> tail_times;
  std::vector<double> tail_values;
};

/// Extracts rho_inf as the final shifted frame. Requires the run to have
/// aligned (A(t_end) < 1e-6 A(0), or A(0) already at roundoff) and the
/// Cauchy tail to decrease while above the noise floor; throws NotFlocked
/// otherwise.
FlockExtraction flock_limit(const RunResult& run);

/// (d_inf, d_c1) distance of a state to the traveling wave of a flock:
/// d_inf = sup |rho(x,t) - rho_inf(x - t ubar)|, d_c1 adds the gradient gap.
std::pair<double, double> flock_distance(const State& s, const FlockState& f);

struct StabilityRow {
  double eps = 0.0;
  double dist_inf = 0.0;
  double a0 = 0.0;
};

struct StabilityResult {
  std::vector<StabilityRow> rows;      // in the order of eps_list
  double fitted_theta = 0.0;           // log-log slope of dist vs eps
  double reported_c = 0.0;             // max over rows of dist/eps
};

/// Perturbs (ubar, rho_inf) by mean-free fields of sup-size eps (one shape,
/// drawn from cfg.seed, scaled per entry), runs each member to cfg.t_end and
/// records |r_inf - rho_inf|_inf. Members run in parallel worker threads;
/// the table order follows eps_list regardless of completion order.
StabilityResult stability_experiment(const FlockState& base,
                                     std::span<const double> eps_list,
                                     const SimConfig& cfg, int threads = 1);

}  // namespace flocksim
