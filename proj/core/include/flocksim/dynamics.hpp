#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "flocksim/diagnostics.hpp"
#include "flocksim/kernel.hpp"
#include "flocksim/sim_config.hpp"
#include "flocksim/state.hpp"

namespace flocksim {

/// Grid and kernel assembled once per run from a validated config.
struct SimContext {
  std::shared_ptr<const TorusGrid> grid;
  KernelSpec kernel;
  SimConfig cfg;
};

SimContext make_context(const SimConfig& cfg);

/// Initial data presets. "perturbed_flock" is
///   rho = rho_bar (1 + a sum_{0<|k|<=k0} cos(k.x + theta_k)),
///   u   = ubar + eps sum_{0<|k|<=k0} sin(k.x + psi_k) e_k,
/// with phases (and in 2D the unit directions e_k) drawn from the seeded
/// generator; "flock" keeps the same density profile with u identically ubar.
State initial_state(const SimContext& ctx);

/// Semi-discrete right-hand side of the system:
///   rho_t = -div(rho u),   u_t = -(u . grad) u + [L, u](rho),
/// with every product dealiased by the two-thirds rule when enabled.
struct Rhs {
  ScalarField rho_t;
  VectorField u_t;
};
Rhs rhs(const State& s, const KernelSpec& spec, bool dealias_products = true);

/// e = div u + L(rho); mean-free to machine precision.
ScalarField e_quantity(const State& s, const KernelSpec& spec);

/// Discrepancy between two routes to e_t: a finite difference of e along one
/// probe step of the integrator, and the evolution law
///   e_t = -div(u e) + (div u)^2 - tr((grad u)^2).
/// Contract: O(dt_probe) until the spectral truncation floor.
double e_law_residual(const State& s, const KernelSpec& spec, const SimConfig& cfg,
                      double dt_probe = 1e-6);

/// dt = min( cfl_advect dx / (max|u| + eps),
///           cfl_diffuse dx^alpha / (c(n,alpha) max rho) );
/// the second term models the stiff alignment part ~ rho L(u).
double cfl_dt(const State& s, const KernelSpec& spec, const SimConfig& cfg);

/// One classical RK4 step. Aborts (SolverAbort) on positivity loss or NaN.
State step(const State& s, double dt, const KernelSpec& spec, const SimConfig& cfg);

struct RunSinks {
  /// Called at every output frame (including t = 0 and the final state).
  std::function<void(const State&, const DiagnosticsRecord&)> on_frame;
};

struct RunResult {
  SimConfig cfg;
  std::vector<State> frames;
  std::vector<DiagnosticsRecord> records;
  bool aborted = false;
  std::string abort_reason;
};

/// Integrates to t_end, emitting frames and diagnostics at the output
/// cadence. On a numerical abort the last accepted state becomes the final
/// frame and the result is marked aborted. `initial` overrides the preset.
RunResult run(const SimConfig& cfg, const RunSinks* sinks = nullptr,
              const State* initial = nullptr);

}  // namespace flocksim
