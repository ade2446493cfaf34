#include "flocksim/torus_grid.hpp"

#include <cmath>
#include <stdexcept>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

TorusGrid::TorusGrid(int dim, int n)
    : dim_(dim),
      n_(n),
      spacing_(kTwoPi / static_cast<double>(n)),
      nodes_(dim == 1 ? static_cast<std::size_t>(n)
                      : static_cast<std::size_t>(n) * static_cast<std::size_t>(n)),
      wavenumbers_(static_cast<std::size_t>(n)),
      dealias_(nodes_) {
  for (int i = 0; i < n_; ++i) {
    wavenumbers_[static_cast<std::size_t>(i)] = (i <= n_ / 2) ? i : i - n_;
  }
  // Two-thirds rule: a mode survives iff every |k_i| <= N/3.
  const int kmax = n_ / 3;
  for (std::size_t m = 0; m < nodes_; ++m) {
    int k1 = 0, k2 = 0;
    mode_wavenumbers(m, &k1, &k2);
    dealias_[m] = (std::abs(k1) <= kmax && std::abs(k2) <= kmax) ? 1 : 0;
  }
}

std::shared_ptr<const TorusGrid> TorusGrid::create(int dim, int points_per_dim) {
  if (dim != 1 && dim != 2) {
    throw ConfigError("grid dim must be 1 or 2, got " + std::to_string(dim));
  }
  if (!is_power_of_two(points_per_dim) || points_per_dim < 16) {
    throw ConfigError("points per dim must be a power of two >= 16, got " +
                      std::to_string(points_per_dim));
  }
  return std::shared_ptr<const TorusGrid>(new TorusGrid(dim, points_per_dim));
}

}  // namespace flocksim
