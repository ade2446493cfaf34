#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "flocksim/field.hpp"
#include "flocksim/torus_grid.hpp"

namespace flocksim {

/// How the singular cell |z| < spacing is treated in the pointwise
/// dissipation quadrature: replaced by its second-order Taylor value, or
/// dropped entirely (a strict lower bound).
enum class SingularShell { taylor_proxy, exclude };

/// Periodized power-law interaction kernel
///   phi_alpha(x) = sum_{k in Z^n} |x + 2 pi k|^{-(n+alpha)},  0 < alpha < 2,
/// together with everything derived from it: the spectral multiplier table
/// lambda(k) = -c(n,alpha) |k|^alpha of the averaging operator, the kernel
/// minimum phi_min over the torus, and a lattice table of kernel values used
/// by quadrature-based functionals.
///
/// The lattice sum is truncated at |k|_inf <= lattice_images and completed by
/// a moment expansion of the discarded images (x-independent sums precomputed
/// at construction). Relative error is below 1e-8 for lattice_images >= 20.
///
/// Immutable and shareable after construction; the lattice kernel table is
/// materialized lazily behind an atomic pointer.
class KernelSpec {
 public:
  KernelSpec(double alpha, std::shared_ptr<const TorusGrid> grid,
             int lattice_images = 20);

  double alpha() const { return alpha_; }
  int dim() const { return grid_->dim(); }
  int lattice_images() const { return images_; }
  const TorusGrid& grid() const { return *grid_; }
  const std::shared_ptr<const TorusGrid>& grid_ptr() const { return grid_; }

  /// c(n,alpha) > 0 with lambda(k) = -c(n,alpha)|k|^alpha.
  double norm_const() const { return norm_const_; }

  /// min over the torus of the periodized kernel; evaluated at the far point
  /// (pi,...,pi) and certified by a 64-points-per-dim scan at construction.
  double phi_min() const { return phi_min_; }

  /// Multiplier lambda(k) per flat mode index; lambda(0) = 0, lambda < 0
  /// elsewhere, radially decreasing.
  std::span<const double> multiplier() const { return multiplier_; }

  /// Periodized kernel sampled at all nonzero lattice offsets (entry 0 is 0).
  const std::vector<double>& lattice_kernel_table() const;

  struct TailMoments {
    double s0 = 0.0;   // sum |2pi k|^{-s} over discarded images
    double s2 = 0.0;   // sum |2pi k|^{-s-2}
    double s4 = 0.0;   // sum |2pi k|^{-s-4}
    double m4 = 0.0;   // 2D: sum (2pi k1)^4 |2pi k|^{-s-8}
    double m22 = 0.0;  // 2D: sum (2pi k1)^2 (2pi k2)^2 |2pi k|^{-s-8}
  };
  const TailMoments& tail_moments() const { return tail_; }

 private:
  double alpha_;
  std::shared_ptr<const TorusGrid> grid_;
  int images_;
  double norm_const_;
  double phi_min_;
  std::vector<double> multiplier_;
  TailMoments tail_;
  mutable std::shared_ptr<const std::vector<double>> lattice_table_;
};

/// Periodized kernel value at a torus point (x2 ignored in 1D). Throws on the
/// singular point x = 0 (mod 2 pi).
double kernel_value(const KernelSpec& spec, double x1, double x2 = 0.0);

/// Spectral application of the averaging operator: multiply mode k by
/// lambda(k). Mean of the result is zero to machine precision.
ScalarField apply_lphi(const ScalarField& f, const KernelSpec& spec);

/// Alignment force [L,u](rho) = L(rho u) - L(rho) u, componentwise, with the
/// two-thirds rule applied to both products when dealias_products is set.
VectorField commutator(const ScalarField& rho, const VectorField& u,
                       const KernelSpec& spec, bool dealias_products = true);

/// Pointwise dissipation D_alpha f(x) = int |f(x+z)-f(x)|^2 phi(z) dz by
/// lattice quadrature with the periodized kernel; the cell around z = 0 uses
/// the Taylor proxy |grad f(x)|^2 int_{|z|<spacing} |z|^{2-n-alpha} dz.
double dissipation_functional(const ScalarField& f, std::size_t node,
                              const KernelSpec& spec,
                              SingularShell shell = SingularShell::taylor_proxy);

/// Vector version: sum of the componentwise dissipations (Euclidean norm in
/// the integrand).
double dissipation_functional(const VectorField& f, std::size_t node,
                              const KernelSpec& spec,
                              SingularShell shell = SingularShell::taylor_proxy);

/// Direct-quadrature route for the averaging operator: midpoint quadrature
/// of the kernel integral on a refine_factor-times finer lattice (the field
/// is interpolated spectrally, the kernel evaluated per offset) with a
/// Hessian proxy for the singular cell. Independent of the spectral path and
/// O(N^{2n}); serves as the oracle the multiplier route is checked against.
ScalarField apply_lphi_quadrature(const ScalarField& f, const KernelSpec& spec,
                                  int refine_factor = 4);

/// r^{-s} given r^2, with sqrt-chain fast paths for s in multiples of 1/2.
double inv_pow_from_square(double r2, double s);

}  // namespace flocksim
