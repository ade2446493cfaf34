#pragma once

#include <array>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "flocksim/kernel.hpp"
#include "flocksim/state.hpp"

namespace flocksim {

/// One time-sample of all monitored quantities. Flock distances are filled
/// in by the caller once a limiting flock exists (NaN until then). div_inf
/// is kept in memory for the density-envelope check; it is not a CSV column.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  std::array<double, 2> momentum{0.0, 0.0};
  std::array<double, 2> mean_velocity{0.0, 0.0};
  double amplitude = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double e_inf = 0.0;
  double e_lip = 0.0;
  double u_c1 = 0.0;
  double u_c2 = 0.0;
  double u_c2g = 0.0;
  double flock_dist_inf = std::numeric_limits<double>::quiet_NaN();
  double flock_dist_c1 = std::numeric_limits<double>::quiet_NaN();
  double div_inf = 0.0;
};

struct Conserved {
  double mass = 0.0;
  std::array<double, 2> momentum{0.0, 0.0};
  std::array<double, 2> mean_velocity{0.0, 0.0};
};

/// Mass, momentum and mean velocity by trapezoidal (= spectral on a uniform
/// periodic grid) quadrature. Throws on non-positive mass.
Conserved conserved(const State& s);

/// A(t) = max over nodes of |u(x) - ubar| (Euclidean).
double amplitude(const State& s);

/// Lattice shifts the seminorm sup ranges over: every shift with
/// 0 < |h| <= pi in 1D; axis-aligned and diagonal shifts in 2D (a documented
/// lower bound of the full sup, which would cost O(N^4)).
std::vector<GridShift> seminorm_shift_set(const TorusGrid& grid);

/// Hoelder seminorm by finite differences:
///   order 1:  sup |delta_h u| / |h|
///   order 2:  sup |delta_h^2 u| / |h|^2
///   order 3:  sup |delta_h^3 u| / |h|^{2+gamma}
/// with the sup over nodes and the shift set above, Euclidean norm of the
/// difference in the numerator.
double holder_seminorm(const VectorField& u, int order, double gamma = 0.25);
double holder_seminorm(const ScalarField& f, int order, double gamma = 0.25);

/// Worst excess of |delta_h^3 u(x)| over min(8 A, [u]_{2+gamma} |h|^{2+gamma})
/// across the scan set; <= 0 (up to roundoff) whenever the definitions hold.
double holder_interpolation_gap(const VectorField& u, double amplitude_bound,
                                double gamma);

/// Exponential decay rate by least squares on (t, log v).
struct DecayFit {
  double rate = 0.0;       // delta >= 0 for decaying series
  double prefactor = 0.0;  // exp(intercept)
  double t0 = 0.0;
  double t1 = 0.0;
  double residual = 0.0;   // RMS of the log-linear fit residuals
};

/// Fits samples with t in [t0, t1]. Throws std::invalid_argument when fewer
/// than two samples fall in the window, any value is non-positive, or any
/// value sits below 100x machine epsilon (the fit would read noise).
DecayFit decay_fit(std::span<const double> t, std::span<const double> v, double t0,
                   double t1);

/// Largest window end such that v stays above max(100 eps, rel_floor * max v);
/// convenience for picking honest fit windows on decaying series.
double decay_window_end(std::span<const double> t, std::span<const double> v,
                        double rel_floor = 1e-12);

/// Empirical constant of the nonlinear maximum principle: the minimum over
/// sampled (x, h) pairs of
///   D_alpha(delta_h^3 u)(x) [u]_2^alpha |h|^{3 alpha} / |delta_h^3 u(x)|^{2+alpha},
/// skipping pairs with |delta_h^3 u(x)| < 1e-8 [u]_2 |h|^2. Strictly positive
/// for smooth non-constant fields. Throws when every sample was skipped.
double nmp_certificate(const VectorField& u, const KernelSpec& spec,
                       int sample_count, std::mt19937_64& eng,
                       SingularShell shell = SingularShell::taylor_proxy);

/// Density-bound envelopes built from accumulated int |div u|_inf dt:
/// rho_min(t) >= rho_min(0) exp(-I(t)) (1 - slack) and symmetrically for
/// rho_max. Returns the worst multiplicative margin (>= 1 means all good).
struct EnvelopeCheck {
  bool ok = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
};
EnvelopeCheck density_envelope_check(std::span<const DiagnosticsRecord> records,
                                     double slack = 1e-3);

/// Full record for one state (flock distances left NaN).
DiagnosticsRecord compute_record(const State& s, const KernelSpec& spec,
                                 double gamma);

}  // namespace flocksim
