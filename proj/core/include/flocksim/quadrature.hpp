#pragma once

#include <functional>

namespace flocksim {

/// Adaptive Simpson quadrature on [a,b]. Throws QuadratureError when the
/// tolerance cannot be met within the depth budget.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

/// Alignment-strength constant c(n,alpha): the integral of
/// (1 - cos z_1) / |z|^(n+alpha) over R^n, so that the averaging operator
/// acts on e^{ik.x} as multiplication by -c(n,alpha)|k|^alpha.
///
/// The 1D value uses the closed form pi / (Gamma(1+alpha) sin(pi alpha/2)).
/// The 2D value is computed by adaptive quadrature of the heat-kernel
/// representation (exact rewrite of the integral; non-oscillatory integrand).
double alignment_constant(int dim, double alpha);

/// Quadrature route for c(n,alpha), valid for dim 1 and 2. Exposed so tests
/// can cross-check the closed forms independently.
double alignment_constant_quadrature(int dim, double alpha);

}  // namespace flocksim
