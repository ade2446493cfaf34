#include "flocksim/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "flocksim/dynamics.hpp"
#include "flocksim/errors.hpp"

namespace flocksim {

Conserved conserved(const State& s) {
  const TorusGrid& g = s.rho.grid();
  const double cell = std::pow(g.spacing(), g.dim());
  Conserved out;
  double mass = 0.0;
  std::array<double, 2> mom{0.0, 0.0};
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    mass += s.rho[i];
    for (int c = 0; c < s.u.dim(); ++c) {
      mom[static_cast<std::size_t>(c)] += s.rho[i] * s.u.component(c)[i];
    }
  }
  out.mass = mass * cell;
  if (out.mass <= 0.0) throw std::invalid_argument("non-positive mass");
  for (int c = 0; c < s.u.dim(); ++c) {
    out.momentum[static_cast<std::size_t>(c)] = mom[static_cast<std::size_t>(c)] * cell;
    out.mean_velocity[static_cast<std::size_t>(c)] =
        out.momentum[static_cast<std::size_t>(c)] / out.mass;
  }
  return out;
}

double amplitude(const State& s) {
  const Conserved c = conserved(s);
  const std::size_t nodes = s.rho.grid().node_count();
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double d2 = 0.0;
    for (int a = 0; a < s.u.dim(); ++a) {
      const double d = s.u.component(a)[i] - c.mean_velocity[static_cast<std::size_t>(a)];
      d2 += d * d;
    }
    worst = std::max(worst, d2);
  }
  return std::sqrt(worst);
}

std::vector<GridShift> seminorm_shift_set(const TorusGrid& grid) {
  const int n = grid.points_per_dim();
  std::vector<GridShift> shifts;
  if (grid.dim() == 1) {
    for (int j = 1; j <= n / 2; ++j) shifts.emplace_back(grid, j);
    return shifts;
  }
  for (int j = 1; j <= n / 2; ++j) {
    shifts.emplace_back(grid, j, 0);
    shifts.emplace_back(grid, 0, j);
  }
  const double pi = kTwoPi / 2.0;
  for (int j = 1; j * grid.spacing() * std::sqrt(2.0) <= pi; ++j) {
    shifts.emplace_back(grid, j, j);
    shifts.emplace_back(grid, j, -j);
  }
  return shifts;
}

namespace {

double max_euclid_norm(const VectorField& u) {
  return u.max_norm();
}

double shift_exponent(int order, double gamma) {
  if (order == 1) return 1.0;
  if (order == 2) return 2.0;
  if (order == 3) return 2.0 + gamma;
  throw std::invalid_argument("seminorm order must be 1, 2 or 3");
}

}  // namespace

double holder_seminorm(const VectorField& u, int order, double gamma) {
  const double p = shift_exponent(order, gamma);
  double sup = 0.0;
  for (const GridShift& h : seminorm_shift_set(u.grid())) {
    const VectorField d = finite_difference(u, h, order);
    sup = std::max(sup, max_euclid_norm(d) / std::pow(h.as_length(), p));
  }
  return sup;
}

double holder_seminorm(const ScalarField& f, int order, double gamma) {
  return holder_seminorm(VectorField({f}), order, gamma);
}

double holder_interpolation_gap(const VectorField& u, double amplitude_bound,
                                double gamma) {
  const double c2g = holder_seminorm(u, 3, gamma);
  double worst = -std::numeric_limits<double>::infinity();
  for (const GridShift& h : seminorm_shift_set(u.grid())) {
    const VectorField d3 = finite_difference(u, h, 3);
    const double bound =
        std::min(8.0 * amplitude_bound, c2g * std::pow(h.as_length(), 2.0 + gamma));
    const std::size_t nodes = u.grid().node_count();
    for (std::size_t i = 0; i < nodes; ++i) {
      double n2 = 0.0;
      for (int c = 0; c < u.dim(); ++c) {
        n2 += d3.component(c)[i] * d3.component(c)[i];
      }
      worst = std::max(worst, std::sqrt(n2) - bound);
    }
  }
  return worst;
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> v, double t0,
                   double t1) {
  if (t.size() != v.size()) throw std::invalid_argument("series size mismatch");
  const double floor = 100.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (v[i] <= 0.0) {
      throw std::invalid_argument("decay fit window contains non-positive values");
    }
    if (v[i] < floor) {
      throw std::invalid_argument(
          "decay fit window reaches below 100x machine epsilon");
    }
    ts.push_back(t[i]);
    ls.push_back(std::log(v[i]));
  }
  if (ts.size() < 2) {
    throw std::invalid_argument("decay fit window holds fewer than two samples");
  }
  const double n = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += ls[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * ls[i];
  }
  const double denom = n * stt - st * st;
  if (denom == 0.0) throw std::invalid_argument("degenerate decay fit window");
  const double slope = (n * stl - st * sl) / denom;
  const double intercept = (sl - slope * st) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ls[i] - (intercept + slope * ts[i]);
    rss += r * r;
  }
  DecayFit fit;
  fit.rate = -slope;
  fit.prefactor = std::exp(intercept);
  fit.t0 = t0;
  fit.t1 = t1;
  fit.residual = std::sqrt(rss / n);
  return fit;
}

double decay_window_end(std::span<const double> t, std::span<const double> v,
                        double rel_floor) {
  if (t.empty()) throw std::invalid_argument("empty series");
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, x);
  const double floor =
      std::max(100.0 * std::numeric_limits<double>::epsilon(), rel_floor * vmax);
  double end = t.front();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (v[i] < floor) break;
    end = t[i];
  }
  return end;
}

double nmp_certificate(const VectorField& u, const KernelSpec& spec,
                       int sample_count, std::mt19937_64& eng, SingularShell shell) {
  const TorusGrid& g = u.grid();
  const double alpha = spec.alpha();
  const double c2 = holder_seminorm(u, 2);
  const auto shifts = seminorm_shift_set(g);
  std::map<std::pair<int, int>, VectorField> d3_cache;

  double best = std::numeric_limits<double>::infinity();
  int kept = 0;
  for (int s = 0; s < sample_count; ++s) {
    const std::size_t node = static_cast<std::size_t>(
        uniform_unit(eng) * static_cast<double>(g.node_count()));
    const GridShift& h =
        shifts[static_cast<std::size_t>(uniform_unit(eng) * shifts.size())];
    const auto key = std::make_pair(h.offset(0), h.offset(1));
    auto it = d3_cache.find(key);
    if (it == d3_cache.end()) {
      it = d3_cache.emplace(key, finite_difference(u, h, 3)).first;
    }
    const VectorField& d3 = it->second;
    double n2 = 0.0;
    for (int c = 0; c < u.dim(); ++c) n2 += d3.component(c)[node] * d3.component(c)[node];
    const double mag = std::sqrt(n2);
    const double hl = h.as_length();
    if (mag < 1e-8 * c2 * hl * hl) continue;  // near-degenerate pair
    const double diss = dissipation_functional(d3, node, spec, shell);
    const double ratio = diss * std::pow(c2, alpha) * std::pow(hl, 3.0 * alpha) /
                         std::pow(mag, 2.0 + alpha);
    best = std::min(best, ratio);
    ++kept;
  }
  if (kept == 0) {
    throw std::runtime_error("nmp certificate: every sample was skipped");
  }
  return best;
}

EnvelopeCheck density_envelope_check(std::span<const DiagnosticsRecord> records,
                                     double slack) {
  if (records.empty()) throw std::invalid_argument("no records");
  EnvelopeCheck out;
  const double rho_min0 = records.front().rho_min;
  const double rho_max0 = records.front().rho_max;
  double integral = 0.0;
  for (std::size_t j = 0; j < records.size(); ++j) {
    if (j > 0) {
      const double dt = records[j].t - records[j - 1].t;
      integral += 0.5 * dt * (records[j].div_inf + records[j - 1].div_inf);
    }
    const double lo = rho_min0 * std::exp(-integral) * (1.0 - slack);
    const double hi = rho_max0 * std::exp(integral) * (1.0 + slack);
    const double margin =
        std::min(records[j].rho_min / lo, hi / records[j].rho_max);
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_t = records[j].t;
    }
  }
  out.ok = out.worst_margin >= 1.0;
  return out;
}

DiagnosticsRecord compute_record(const State& s, const KernelSpec& spec,
                                 double gamma) {
  DiagnosticsRecord rec;
  rec.t = s.t;
  const Conserved c = conserved(s);
  rec.mass = c.mass;
  rec.momentum = c.momentum;
  rec.mean_velocity = c.mean_velocity;
  rec.amplitude = amplitude(s);
  rec.rho_min = s.rho.min();
  rec.rho_max = s.rho.max();
  const ScalarField e = e_quantity(s, spec);
  rec.e_inf = e.max_abs();
  rec.e_lip = holder_seminorm(e, 1, gamma);
  rec.u_c1 = holder_seminorm(s.u, 1, gamma);
  rec.u_c2 = holder_seminorm(s.u, 2, gamma);
  rec.u_c2g = holder_seminorm(s.u, 3, gamma);
  rec.div_inf = divergence(s.u).max_abs();
  return rec;
}

}  // namespace flocksim
