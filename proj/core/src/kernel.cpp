#include "flocksim/kernel.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "flocksim/errors.hpp"
#include "flocksim/quadrature.hpp"

namespace flocksim {

namespace {

constexpr double kPi = kTwoPi / 2.0;

// int_0^{pi/4} cos^p(theta) dtheta, p > -1.
double quarter_cos_power(double p) {
  return adaptive_simpson([p](double t) { return std::pow(std::cos(t), p); }, 0.0,
                          kPi / 4.0, 1e-14);
}

// Exterior lattice sum  sum_{|k|_inf > K2} |2 pi k|^{-sigma}  beyond the
// directly accumulated shells, by midpoint-rule integral comparison with the
// leading curvature correction.
double exterior_sum_1d(double sigma, int k2) {
  const double b = static_cast<double>(k2) + 0.5;
  const double integral = std::pow(b, 1.0 - sigma) / (sigma - 1.0);
  const double curvature = -sigma * std::pow(b, -sigma - 1.0) / 24.0;
  return 2.0 * std::pow(kTwoPi, -sigma) * (integral + curvature);
}

double exterior_sum_2d(double sigma, int k2) {
  const double b = static_cast<double>(k2) + 0.5;
  const double integral =
      8.0 / (sigma - 2.0) * std::pow(b, 2.0 - sigma) * quarter_cos_power(sigma - 2.0);
  // - (1/24) int ext laplacian(|k|^-sigma), via the boundary flux of the
  // enclosing square.
  const double curvature =
      -(8.0 * sigma * std::pow(b, -sigma) * quarter_cos_power(sigma)) / 24.0;
  return std::pow(kTwoPi, -sigma) * (integral + curvature);
}

}  // namespace

double inv_pow_from_square(double r2, double s) {
  const double p = 0.5 * s;
  const double ip = std::floor(p + 1e-12);
  const double frac = p - ip;
  double base = 1.0;
  for (int i = 0; i < static_cast<int>(ip); ++i) base *= r2;
  if (std::abs(frac) < 1e-12) return 1.0 / base;
  if (std::abs(frac - 0.5) < 1e-12) return 1.0 / (base * std::sqrt(r2));
  if (std::abs(frac - 0.25) < 1e-12) return 1.0 / (base * std::sqrt(std::sqrt(r2)));
  if (std::abs(frac - 0.75) < 1e-12) {
    return 1.0 / (base * std::sqrt(r2) * std::sqrt(std::sqrt(r2)));
  }
  return std::pow(r2, -p);
}

KernelSpec::KernelSpec(double alpha, std::shared_ptr<const TorusGrid> grid,
                       int lattice_images)
    : alpha_(alpha), grid_(std::move(grid)), images_(lattice_images) {
  if (alpha_ <= 0.0 || alpha_ >= 2.0) {
    throw ConfigError("alpha must lie in (0,2)");
  }
  if (images_ < 1) {
    throw ConfigError("lattice_images must be >= 1");
  }
  const int n = grid_->dim();
  const double s = n + alpha_;

  norm_const_ = alignment_constant(n, alpha_);

  // Discarded-image moments: direct shells K < |k|_inf <= K2, then the
  // integral-comparison remainder.
  if (n == 1) {
    const int k2 = std::max(2000, 40 * images_);
    for (int k = images_ + 1; k <= k2; ++k) {
      const double y2 = kTwoPi * k * (kTwoPi * k);
      tail_.s0 += 2.0 * inv_pow_from_square(y2, s);
      tail_.s2 += 2.0 * inv_pow_from_square(y2, s + 2.0);
      tail_.s4 += 2.0 * inv_pow_from_square(y2, s + 4.0);
    }
    tail_.s0 += exterior_sum_1d(s, k2);
    tail_.s2 += exterior_sum_1d(s + 2.0, k2);
    tail_.s4 += exterior_sum_1d(s + 4.0, k2);
  } else {
    const int k2 = std::min(2000, std::max(200, 4 * images_));
    for (int k1 = -k2; k1 <= k2; ++k1) {
      for (int kk2 = -k2; kk2 <= k2; ++kk2) {
        if (std::abs(k1) <= images_ && std::abs(kk2) <= images_) continue;
        const double y1 = kTwoPi * k1;
        const double y2c = kTwoPi * kk2;
        const double r2 = y1 * y1 + y2c * y2c;
        tail_.s0 += inv_pow_from_square(r2, s);
        tail_.s2 += inv_pow_from_square(r2, s + 2.0);
        tail_.s4 += inv_pow_from_square(r2, s + 4.0);
        const double w8 = inv_pow_from_square(r2, s + 8.0);
        tail_.m4 += y1 * y1 * y1 * y1 * w8;
        tail_.m22 += y1 * y1 * y2c * y2c * w8;
      }
    }
    tail_.s0 += exterior_sum_2d(s, k2);
    tail_.s2 += exterior_sum_2d(s + 2.0, k2);
    tail_.s4 += exterior_sum_2d(s + 4.0, k2);
    // Residual m4/m22 images beyond K2 are O(K2^{-s-2}) relative and are
    // folded in via their angular averages (3/8 and 1/8 of the radial sum).
    const double rad = exterior_sum_2d(s + 4.0, k2);
    tail_.m4 += 0.375 * rad;
    tail_.m22 += 0.125 * rad;
  }

  // Spectral multiplier lambda(k) = -c |k|^alpha per flat mode.
  multiplier_.resize(grid_->node_count());
  for (std::size_t m = 0; m < multiplier_.size(); ++m) {
    int k1 = 0, k2w = 0;
    grid_->mode_wavenumbers(m, &k1, &k2w);
    const double kk2 = static_cast<double>(k1) * k1 + static_cast<double>(k2w) * k2w;
    multiplier_[m] = kk2 == 0.0 ? 0.0 : -norm_const_ * std::pow(kk2, 0.5 * alpha_);
  }

  // phi_min: far-point value, certified minimal by a coarse scan. The paper
  // does not pin the location of the minimum, so the scan is mandatory.
  const double far = kernel_value(*this, kPi, kPi);
  const int scan = 64;
  const double step = kTwoPi / scan;
  double scan_min = far;
  if (n == 1) {
    for (int j = 1; j < scan; ++j) {
      scan_min = std::min(scan_min, kernel_value(*this, j * step));
    }
  } else {
    for (int j1 = 0; j1 < scan; ++j1) {
      for (int j2 = 0; j2 < scan; ++j2) {
        if (j1 == 0 && j2 == 0) continue;
        scan_min = std::min(scan_min, kernel_value(*this, j1 * step, j2 * step));
      }
    }
  }
  if (scan_min < far * (1.0 - 1e-12)) {
    throw std::runtime_error(
        "kernel scan found a value below the far point; kernel code is broken");
  }
  phi_min_ = far;
}

const std::vector<double>& KernelSpec::lattice_kernel_table() const {
  auto cached = std::atomic_load(&lattice_table_);
  if (!cached) {
    const TorusGrid& g = *grid_;
    const int n = g.points_per_dim();
    auto table = std::make_shared<std::vector<double>>(g.node_count(), 0.0);
    auto signed_offset = [n](int i) { return i > n / 2 ? i - n : i; };
    if (g.dim() == 1) {
      for (int i = 1; i < n; ++i) {
        (*table)[static_cast<std::size_t>(i)] =
            kernel_value(*this, g.spacing() * signed_offset(i));
      }
    } else {
      for (int i1 = 0; i1 < n; ++i1) {
        for (int i2 = 0; i2 < n; ++i2) {
          if (i1 == 0 && i2 == 0) continue;
          (*table)[g.flat_index(i1, i2)] =
              kernel_value(*this, g.spacing() * signed_offset(i1),
                           g.spacing() * signed_offset(i2));
        }
      }
    }
    cached = std::shared_ptr<const std::vector<double>>(std::move(table));
    std::atomic_store(&lattice_table_, cached);
  }
  return *cached;
}

double kernel_value(const KernelSpec& spec, double x1, double x2) {
  const int n = spec.dim();
  const double s = n + spec.alpha();
  const int K = spec.lattice_images();
  // Canonical representative with |x_i| <= pi; images are summed explicitly,
  // so this only conditions the moment expansion.
  double w1 = std::remainder(x1, kTwoPi);
  double w2 = n == 2 ? std::remainder(x2, kTwoPi) : 0.0;
  const double r2 = w1 * w1 + w2 * w2;
  if (r2 < 1e-18) {
    throw std::domain_error("kernel value requested at the singular point 0");
  }

  double direct = 0.0;
  if (n == 1) {
    for (int k = -K; k <= K; ++k) {
      const double d = w1 + kTwoPi * k;
      direct += inv_pow_from_square(d * d, s);
    }
  } else {
    for (int k1 = -K; k1 <= K; ++k1) {
      const double d1 = w1 + kTwoPi * k1;
      for (int k2 = -K; k2 <= K; ++k2) {
        const double d2 = w2 + kTwoPi * k2;
        direct += inv_pow_from_square(d1 * d1 + d2 * d2, s);
      }
    }
  }

  // Discarded images: Gegenbauer expansion of |x+y|^{-s} around |y|^{-s},
  // odd orders cancel over the symmetric image set.
  const auto& tm = spec.tail_moments();
  const double lam = 0.5 * s;
  const double order2 = lam * ((s + 2.0) / n - 1.0) * r2 * tm.s2;
  double order4 = 0.0;
  if (n == 1) {
    order4 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) / 24.0 * r2 * r2 * tm.s4;
  } else {
    const double l4 = lam * (lam + 1.0) * (lam + 2.0) * (lam + 3.0);
    const double l3 = lam * (lam + 1.0) * (lam + 2.0);
    const double l2 = lam * (lam + 1.0);
    const double quartic = (w1 * w1 * w1 * w1 + w2 * w2 * w2 * w2) * tm.m4 +
                           6.0 * w1 * w1 * w2 * w2 * tm.m22;
    order4 = (2.0 / 3.0) * l4 * quartic + (0.5 * l2 - l3) * r2 * r2 * tm.s4;
  }
  return direct + tm.s0 + order2 + order4;
}

ScalarField apply_lphi(const ScalarField& f, const KernelSpec& spec) {
  if (!f.grid().same_layout(spec.grid())) {
    throw std::invalid_argument("field grid does not match kernel spec grid");
  }
  std::vector<Complex> modes = f.modes();
  const auto mult = spec.multiplier();
  for (std::size_t m = 0; m < modes.size(); ++m) modes[m] *= mult[m];
  return ScalarField::from_modes(f.grid_ptr(), std::move(modes));
}

VectorField commutator(const ScalarField& rho, const VectorField& u,
                       const KernelSpec& spec, bool dealias_products) {
  if (!rho.grid().same_layout(u.grid())) {
    throw std::invalid_argument("rho and u grids differ");
  }
  const ScalarField lrho = apply_lphi(rho, spec);
  std::vector<ScalarField> comps;
  comps.reserve(static_cast<std::size_t>(u.dim()));
  for (int c = 0; c < u.dim(); ++c) {
    ScalarField flux = multiply(rho, u.component(c));
    ScalarField drag = multiply(lrho, u.component(c));
    if (dealias_products) {
      flux = dealias(flux);
      drag = dealias(drag);
    }
    comps.push_back(sub(apply_lphi(flux, spec), drag));
  }
  return VectorField(std::move(comps));
}

namespace {

double dissipation_sum(const ScalarField& f, std::size_t node,
                       const std::vector<double>& table) {
  const TorusGrid& g = f.grid();
  const int n = g.points_per_dim();
  const double fx = f[node];
  double acc = 0.0;
  if (g.dim() == 1) {
    const int i = static_cast<int>(node);
    for (int j = 1; j < n; ++j) {
      const double d = f[static_cast<std::size_t>((i + j) % n)] - fx;
      acc += d * d * table[static_cast<std::size_t>(j)];
    }
    return acc * g.spacing();
  }
  const int i1 = static_cast<int>(node) / n;
  const int i2 = static_cast<int>(node) % n;
  for (int j1 = 0; j1 < n; ++j1) {
    const std::size_t row = g.flat_index((i1 + j1) % n, 0);
    const std::size_t trow = g.flat_index(j1, 0);
    for (int j2 = 0; j2 < n; ++j2) {
      if (j1 == 0 && j2 == 0) continue;
      const double d = f[row + static_cast<std::size_t>((i2 + j2) % n)] - fx;
      acc += d * d * table[trow + static_cast<std::size_t>(j2)];
    }
  }
  return acc * g.spacing() * g.spacing();
}

double shell_coefficient(const KernelSpec& spec) {
  // int_{|z| < spacing} |z|^{2-n-alpha} dz, closed form.
  const double h = spec.grid().spacing();
  const double surface = spec.dim() == 1 ? 2.0 : kTwoPi;
  return surface * std::pow(h, 2.0 - spec.alpha()) / (2.0 - spec.alpha());
}

}  // namespace

double dissipation_functional(const ScalarField& f, std::size_t node,
                              const KernelSpec& spec, SingularShell shell) {
  if (!f.grid().same_layout(spec.grid())) {
    throw std::invalid_argument("field grid does not match kernel spec grid");
  }
  double acc = dissipation_sum(f, node, spec.lattice_kernel_table());
  if (shell == SingularShell::taylor_proxy) {
    double g2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) {
      const double d = derivative(f, a)[node];
      g2 += d * d;
    }
    acc += g2 * shell_coefficient(spec);
  }
  return acc;
}

double dissipation_functional(const VectorField& f, std::size_t node,
                              const KernelSpec& spec, SingularShell shell) {
  double acc = 0.0;
  for (int c = 0; c < f.dim(); ++c) {
    acc += dissipation_functional(f.component(c), node, spec, shell);
  }
  return acc;
}

ScalarField apply_lphi_quadrature(const ScalarField& f, const KernelSpec& spec,
                                  int refine_factor) {
  if (!f.grid().same_layout(spec.grid())) {
    throw std::invalid_argument("field grid does not match kernel spec grid");
  }
  if (refine_factor < 1) throw std::invalid_argument("refine factor must be >= 1");
  const TorusGrid& g = f.grid();
  const int n = g.points_per_dim();
  const int dim = g.dim();
  const int r = refine_factor;
  const auto fine_grid = TorusGrid::create(dim, n * r);
  const int nf = n * r;

  // Spectral interpolation: re-index coarse modes by wavenumber.
  std::vector<Complex> fine_modes(fine_grid->node_count(), Complex(0.0, 0.0));
  const auto& coarse_modes = f.modes();
  auto fine_index_1d = [nf](int k) { return k >= 0 ? k : k + nf; };
  for (std::size_t m = 0; m < coarse_modes.size(); ++m) {
    int k1 = 0, k2 = 0;
    g.mode_wavenumbers(m, &k1, &k2);
    const std::size_t fm =
        dim == 1 ? static_cast<std::size_t>(fine_index_1d(k1))
                 : fine_grid->flat_index(fine_index_1d(k1), fine_index_1d(k2));
    fine_modes[fm] = coarse_modes[m];
  }
  const ScalarField fine = ScalarField::from_modes(fine_grid, std::move(fine_modes));

  // Kernel on every nonzero fine offset.
  const double hf = fine_grid->spacing();
  std::vector<double> phi(fine_grid->node_count(), 0.0);
  auto signed_offset = [nf](int i) { return i > nf / 2 ? i - nf : i; };
  if (dim == 1) {
    for (int i = 1; i < nf; ++i) {
      phi[static_cast<std::size_t>(i)] = kernel_value(spec, hf * signed_offset(i));
    }
  } else {
    for (int i1 = 0; i1 < nf; ++i1) {
      for (int i2 = 0; i2 < nf; ++i2) {
        if (i1 == 0 && i2 == 0) continue;
        phi[fine_grid->flat_index(i1, i2)] =
            kernel_value(spec, hf * signed_offset(i1), hf * signed_offset(i2));
      }
    }
  }

  // Singular cell: int_{|z|<hf} (f(x+z)-f(x)) phi(z) dz ~ (lap f / 2n) *
  // int |z|^{2-n-alpha} dz (the odd term cancels by symmetry).
  ScalarField lap = [&] {
    std::vector<Complex> modes = f.modes();
    for (std::size_t m = 0; m < modes.size(); ++m) {
      int k1 = 0, k2 = 0;
      g.mode_wavenumbers(m, &k1, &k2);
      modes[m] *= -(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
    }
    return ScalarField::from_modes(f.grid_ptr(), std::move(modes));
  }();
  const double surface = dim == 1 ? 2.0 : kTwoPi;
  const double shell =
      surface * std::pow(hf, 2.0 - spec.alpha()) / (2.0 - spec.alpha()) /
      (2.0 * dim);

  const double cell = std::pow(hf, dim);
  std::vector<double> out(g.node_count());
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      const int xi = i * r;
      const double fx = f[static_cast<std::size_t>(i)];
      double acc = 0.0;
      for (int j = 1; j < nf; ++j) {
        acc += (fine[static_cast<std::size_t>((xi + j) % nf)] - fx) *
               phi[static_cast<std::size_t>(j)];
      }
      out[static_cast<std::size_t>(i)] =
          acc * cell + lap[static_cast<std::size_t>(i)] * shell;
    }
  } else {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        const std::size_t node = g.flat_index(i1, i2);
        const double fx = f[node];
        double acc = 0.0;
        for (int j1 = 0; j1 < nf; ++j1) {
          const std::size_t frow = fine_grid->flat_index((i1 * r + j1) % nf, 0);
          const std::size_t prow = fine_grid->flat_index(j1, 0);
          for (int j2 = 0; j2 < nf; ++j2) {
            if (j1 == 0 && j2 == 0) continue;
            acc += (fine[frow + static_cast<std::size_t>((i2 * r + j2) % nf)] - fx) *
                   phi[prow + static_cast<std::size_t>(j2)];
          }
        }
        out[node] = acc * cell + lap[node] * shell;
      }
    }
  }
  return ScalarField(f.grid_ptr(), std::move(out));
}

}  // namespace flocksim
