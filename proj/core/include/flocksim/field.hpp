#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "flocksim/torus_grid.hpp"

namespace flocksim {

using Complex = std::complex<double>;

/// Real scalar sample set on a TorusGrid with a lazily cached spectral
/// representation. Immutable after construction: every operation returns a
/// new field, which keeps the cache sound and makes sharing across threads
/// safe (the cache is published through atomic shared_ptr loads/stores).
class ScalarField {
 public:
  ScalarField(std::shared_ptr<const TorusGrid> grid, std::vector<double> values);

  /// Builds a field from spectral coefficients. Coefficients are
  /// conjugate-symmetrized first so the result is a genuine real field and
  /// the cached modes match the stored values.
  static ScalarField from_modes(std::shared_ptr<const TorusGrid> grid,
                                std::vector<Complex> modes);

  static ScalarField constant(std::shared_ptr<const TorusGrid> grid, double c);

  const TorusGrid& grid() const { return *grid_; }
  const std::shared_ptr<const TorusGrid>& grid_ptr() const { return grid_; }

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Spectral coefficients, computed on first use and cached.
  const std::vector<Complex>& modes() const;

  double min() const;
  double max() const;
  double max_abs() const;
  double mean() const;

 private:
  std::shared_ptr<const TorusGrid> grid_;
  std::vector<double> values_;
  mutable std::shared_ptr<const std::vector<Complex>> modes_;
};

/// dim-many scalar components sharing one grid.
class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);

  const TorusGrid& grid() const { return components_.front().grid(); }
  const std::shared_ptr<const TorusGrid>& grid_ptr() const {
    return components_.front().grid_ptr();
  }
  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarField& component(int i) const {
    return components_[static_cast<std::size_t>(i)];
  }

  /// Pointwise Euclidean norm, maximized over nodes.
  double max_norm() const;

 private:
  std::vector<ScalarField> components_;
};

/// Integer lattice shift, reduced per component to (-N/2, N/2]. The torus
/// length |h| uses the wrapped offsets, so |h| <= pi*sqrt(dim) always.
class GridShift {
 public:
  GridShift(const TorusGrid& grid, int h1, int h2 = 0);

  int offset(int axis) const { return offsets_[static_cast<std::size_t>(axis)]; }
  int dim() const { return dim_; }
  double as_length() const { return length_; }

 private:
  std::array<int, 2> offsets_;
  int dim_;
  double length_;
};

// ---- torus_fields operations (pure; all return new fields) ----

/// Spectral derivative along an axis (0 or 1).
ScalarField derivative(const ScalarField& f, int axis);

/// f(. + v) for an arbitrary real shift vector, via spectral phase factors.
ScalarField translate(const ScalarField& f, const std::vector<double>& v);
VectorField translate(const VectorField& u, const std::vector<double>& v);

/// f(. + h) for a lattice shift, by exact index rotation.
ScalarField rotate(const ScalarField& f, const GridShift& h);

/// delta_h f = f(.+h) - f, iterated `order` times (order in {1,2,3}).
ScalarField finite_difference(const ScalarField& f, const GridShift& h, int order);
VectorField finite_difference(const VectorField& u, const GridShift& h, int order);

/// Zeroes all modes with any |k_i| > N/3.
ScalarField dealias(const ScalarField& f);

ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double c);
ScalarField add_scaled(const ScalarField& a, double c, const ScalarField& b);  // a + c*b
ScalarField multiply(const ScalarField& a, const ScalarField& b);  // node-wise

VectorField add_scaled(const VectorField& a, double c, const VectorField& b);

ScalarField divergence(const VectorField& u);
VectorField gradient(const ScalarField& f);

/// Mean-free random field with modes supported on 0 < |k| <= k_max and
/// amplitudes decaying like decay^|k| (decay=1 gives a flat band). Uses only
/// the 53-bit uniform draws of `eng`, so trajectories are reproducible for a
/// fixed seed on a given platform.
ScalarField random_band_limited(std::shared_ptr<const TorusGrid> grid, int k_max,
                                std::mt19937_64& eng, double decay = 1.0);

/// 53-bit uniform in [0,1) from a mt19937_64 draw.
double uniform_unit(std::mt19937_64& eng);

}  // namespace flocksim
