#include "flocksim/field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "flocksim/errors.hpp"
#include "flocksim/transforms.hpp"

namespace flocksim {

namespace {

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!a.same_layout(b)) {
    throw std::invalid_argument("fields live on different grids");
  }
}

// Index of the mirror mode -k for a flat mode index.
std::size_t mirror_index(const TorusGrid& g, std::size_t m) {
  const int n = g.points_per_dim();
  if (g.dim() == 1) {
    const int i = static_cast<int>(m);
    return static_cast<std::size_t>(i == 0 ? 0 : n - i);
  }
  const int i1 = static_cast<int>(m) / n;
  const int i2 = static_cast<int>(m) % n;
  const int j1 = i1 == 0 ? 0 : n - i1;
  const int j2 = i2 == 0 ? 0 : n - i2;
  return static_cast<std::size_t>(j1) * static_cast<std::size_t>(n) +
         static_cast<std::size_t>(j2);
}

}  // namespace

ScalarField::ScalarField(std::shared_ptr<const TorusGrid> grid,
                         std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->node_count()) {
    throw std::invalid_argument("value count does not match grid");
  }
}

ScalarField ScalarField::from_modes(std::shared_ptr<const TorusGrid> grid,
                                    std::vector<Complex> modes) {
  if (modes.size() != grid->node_count()) {
    throw std::invalid_argument("mode count does not match grid");
  }
  // Enforce conjugate symmetry so values and cached modes agree exactly.
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const std::size_t mm = mirror_index(*grid, m);
    if (mm < m) continue;
    const Complex avg = 0.5 * (modes[m] + std::conj(modes[mm]));
    modes[m] = avg;
    modes[mm] = std::conj(avg);
  }
  auto synth = dft_backward(*grid, modes);
  std::vector<double> values(grid->node_count());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = synth[i].real();
  ScalarField f(std::move(grid), std::move(values));
  std::atomic_store(&f.modes_,
                    std::make_shared<const std::vector<Complex>>(std::move(modes)));
  return f;
}

ScalarField ScalarField::constant(std::shared_ptr<const TorusGrid> grid, double c) {
  std::vector<double> v(grid->node_count(), c);
  return ScalarField(std::move(grid), std::move(v));
}

const std::vector<Complex>& ScalarField::modes() const {
  auto cached = std::atomic_load(&modes_);
  if (!cached) {
    cached = std::make_shared<const std::vector<Complex>>(
        dft_forward(*grid_, values_));
    std::atomic_store(&modes_, cached);
  }
  return *cached;
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

VectorField::VectorField(std::vector<ScalarField> components)
    : components_(std::move(components)) {
  if (components_.empty() || components_.size() > 2) {
    throw std::invalid_argument("vector field needs 1 or 2 components");
  }
  if (components_.size() == 2) {
    require_same_grid(components_[0].grid(), components_[1].grid());
  }
  if (static_cast<int>(components_.size()) != components_[0].grid().dim()) {
    throw std::invalid_argument("component count must equal grid dim");
  }
}

double VectorField::max_norm() const {
  const std::size_t n = grid().node_count();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& c : components_) s += c[i] * c[i];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

GridShift::GridShift(const TorusGrid& grid, int h1, int h2)
    : offsets_{0, 0}, dim_(grid.dim()) {
  const int n = grid.points_per_dim();
  auto reduce = [n](int h) {
    int r = h % n;
    if (r < 0) r += n;        // now in [0, N)
    if (r > n / 2) r -= n;    // now in (-N/2, N/2]
    return r;
  };
  offsets_[0] = reduce(h1);
  offsets_[1] = dim_ == 2 ? reduce(h2) : 0;
  double l2 = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double d = grid.spacing() * static_cast<double>(offsets_[static_cast<std::size_t>(a)]);
    l2 += d * d;
  }
  length_ = std::sqrt(l2);
  if (length_ == 0.0) {
    throw std::invalid_argument("grid shift must be nonzero");
  }
}

ScalarField derivative(const ScalarField& f, int axis) {
  const TorusGrid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) {
    throw std::invalid_argument("derivative axis out of range");
  }
  std::vector<Complex> modes = f.modes();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    int k1 = 0, k2 = 0;
    g.mode_wavenumbers(m, &k1, &k2);
    const double k = axis == 0 ? k1 : k2;
    modes[m] *= Complex(0.0, k);
  }
  return ScalarField::from_modes(f.grid_ptr(), std::move(modes));
}

ScalarField translate(const ScalarField& f, const std::vector<double>& v) {
  const TorusGrid& g = f.grid();
  if (static_cast<int>(v.size()) != g.dim()) {
    throw std::invalid_argument("shift vector dim mismatch");
  }
  std::vector<Complex> modes = f.modes();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    int k1 = 0, k2 = 0;
    g.mode_wavenumbers(m, &k1, &k2);
    double phase = k1 * v[0];
    if (g.dim() == 2) phase += k2 * v[1];
    modes[m] *= Complex(std::cos(phase), std::sin(phase));
  }
  return ScalarField::from_modes(f.grid_ptr(), std::move(modes));
}

VectorField translate(const VectorField& u, const std::vector<double>& v) {
  std::vector<ScalarField> comps;
  comps.reserve(static_cast<std::size_t>(u.dim()));
  for (int c = 0; c < u.dim(); ++c) comps.push_back(translate(u.component(c), v));
  return VectorField(std::move(comps));
}

ScalarField rotate(const ScalarField& f, const GridShift& h) {
  const TorusGrid& g = f.grid();
  const int n = g.points_per_dim();
  std::vector<double> out(g.node_count());
  auto wrap = [n](int i) {
    int r = i % n;
    return r < 0 ? r + n : r;
  };
  if (g.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = f[g.flat_index(wrap(i + h.offset(0)))];
    }
  } else {
    for (int i1 = 0; i1 < n; ++i1) {
      const int j1 = wrap(i1 + h.offset(0));
      for (int i2 = 0; i2 < n; ++i2) {
        out[g.flat_index(i1, i2)] = f[g.flat_index(j1, wrap(i2 + h.offset(1)))];
      }
    }
  }
  return ScalarField(f.grid_ptr(), std::move(out));
}

ScalarField finite_difference(const ScalarField& f, const GridShift& h, int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("finite difference order must be 1, 2 or 3");
  }
  ScalarField cur = f;
  for (int pass = 0; pass < order; ++pass) {
    cur = sub(rotate(cur, h), cur);
  }
  return cur;
}

VectorField finite_difference(const VectorField& u, const GridShift& h, int order) {
  std::vector<ScalarField> comps;
  comps.reserve(static_cast<std::size_t>(u.dim()));
  for (int c = 0; c < u.dim(); ++c) {
    comps.push_back(finite_difference(u.component(c), h, order));
  }
  return VectorField(std::move(comps));
}

ScalarField dealias(const ScalarField& f) {
  const TorusGrid& g = f.grid();
  std::vector<Complex> modes = f.modes();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (!g.dealias_keep(m)) modes[m] = Complex(0.0, 0.0);
  }
  return ScalarField::from_modes(f.grid_ptr(), std::move(modes));
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
  return add_scaled(a, 1.0, b);
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  return add_scaled(a, -1.0, b);
}

ScalarField scale(const ScalarField& a, double c) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= c;
  return ScalarField(a.grid_ptr(), std::move(out));
}

ScalarField add_scaled(const ScalarField& a, double c, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.grid().node_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + c * b[i];
  return ScalarField(a.grid_ptr(), std::move(out));
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.grid().node_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return ScalarField(a.grid_ptr(), std::move(out));
}

VectorField add_scaled(const VectorField& a, double c, const VectorField& b) {
  std::vector<ScalarField> comps;
  comps.reserve(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) {
    comps.push_back(add_scaled(a.component(i), c, b.component(i)));
  }
  return VectorField(std::move(comps));
}

ScalarField divergence(const VectorField& u) {
  ScalarField d = derivative(u.component(0), 0);
  for (int c = 1; c < u.dim(); ++c) d = add(d, derivative(u.component(c), c));
  return d;
}

VectorField gradient(const ScalarField& f) {
  std::vector<ScalarField> comps;
  comps.reserve(static_cast<std::size_t>(f.grid().dim()));
  for (int a = 0; a < f.grid().dim(); ++a) comps.push_back(derivative(f, a));
  return VectorField(std::move(comps));
}

double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

ScalarField random_band_limited(std::shared_ptr<const TorusGrid> grid, int k_max,
                                std::mt19937_64& eng, double decay) {
  if (k_max < 1 || k_max > grid->points_per_dim() / 3) {
    throw std::invalid_argument("k_max must lie in [1, N/3]");
  }
  const TorusGrid& g = *grid;
  std::vector<Complex> modes(g.node_count(), Complex(0.0, 0.0));
  for (std::size_t m = 0; m < modes.size(); ++m) {
    int k1 = 0, k2 = 0;
    g.mode_wavenumbers(m, &k1, &k2);
    const double kk = std::sqrt(static_cast<double>(k1) * k1 +
                                static_cast<double>(k2) * k2);
    if (kk == 0.0 || kk > k_max) continue;
    // Fill only the k1 > 0 (or k1 == 0, k2 > 0) half; the conjugate mirror is
    // installed by from_modes.
    if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
    const double amp = std::pow(decay, kk);
    const double re = 2.0 * uniform_unit(eng) - 1.0;
    const double im = 2.0 * uniform_unit(eng) - 1.0;
    modes[m] = amp * Complex(re, im);
  }
  return ScalarField::from_modes(std::move(grid), std::move(modes));
}

}  // namespace flocksim
