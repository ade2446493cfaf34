#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace flocksim {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform periodic lattice on [0,2pi)^dim, dim in {1,2}.
///
/// Holds the per-dimension wavenumber table in transform (FFT) order and the
/// two-thirds dealiasing mask. The number of points per dimension must be a
/// power of two >= 16 so that spacing * points == 2pi holds exactly in
/// float64 (2pi / 2^m is exact) and transforms stay fast.
class TorusGrid {
 public:
  static std::shared_ptr<const TorusGrid> create(int dim, int points_per_dim);

  int dim() const { return dim_; }
  int points_per_dim() const { return n_; }
  double spacing() const { return spacing_; }
  std::size_t node_count() const { return nodes_; }

  /// Wavenumber of 1-d transform index i, in -N/2 < k <= N/2.
  int wavenumber(int i) const { return wavenumbers_[static_cast<std::size_t>(i)]; }

  /// True for modes kept by the two-thirds rule: all |k_i| <= N/3.
  bool dealias_keep(std::size_t mode_index) const {
    return dealias_[mode_index] != 0;
  }

  /// Physical coordinate of a per-dimension index.
  double coord(int i) const { return spacing_ * static_cast<double>(i); }

  /// Row-major flattening of per-dimension indices (i2 ignored in 1D).
  std::size_t flat_index(int i1, int i2 = 0) const {
    return dim_ == 1 ? static_cast<std::size_t>(i1)
                     : static_cast<std::size_t>(i1) * static_cast<std::size_t>(n_) +
                           static_cast<std::size_t>(i2);
  }

  /// Per-dimension wavenumbers of a flat mode index.
  void mode_wavenumbers(std::size_t mode_index, int* k1, int* k2) const {
    if (dim_ == 1) {
      *k1 = wavenumber(static_cast<int>(mode_index));
      *k2 = 0;
    } else {
      *k1 = wavenumber(static_cast<int>(mode_index) / n_);
      *k2 = wavenumber(static_cast<int>(mode_index) % n_);
    }
  }

  bool same_layout(const TorusGrid& other) const {
    return dim_ == other.dim_ && n_ == other.n_;
  }

 private:
  TorusGrid(int dim, int n);

  int dim_;
  int n_;
  double spacing_;
  std::size_t nodes_;
  std::vector<int> wavenumbers_;
  std::vector<unsigned char> dealias_;
};

}  // namespace flocksim
