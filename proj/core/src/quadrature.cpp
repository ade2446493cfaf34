#include "flocksim/quadrature.hpp"

#include <cmath>

#include "flocksim/errors.hpp"
#include "flocksim/torus_grid.hpp"

namespace flocksim {

namespace {

double simpson_panel(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm) {
  (void)m;
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double fa,
                       double b, double fb, double m, double fm, double whole,
                       double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(f, a, fa, m, fm, lm, flm);
  const double right = simpson_panel(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw QuadratureError("adaptive Simpson did not converge");
  }
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson_panel(f, a, fa, b, fb, m, fm);
  return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double alignment_constant_quadrature(int dim, double alpha) {
  if (alpha <= 0.0 || alpha >= 2.0) {
    throw ConfigError("alpha must lie in (0,2)");
  }
  // Heat-kernel rewrite: the target integral equals
  //   pi^{n/2} / Gamma((n+alpha)/2) * I(alpha),
  //   I(alpha) = int_0^inf  tau^{alpha/2 - 1} (1 - exp(-1/(4 tau))) dtau.
  // Head: below eps the exponential is 1 up to exp(-1/(4 eps)).
  const double eps = 0.005;
  const double head = std::pow(eps, 0.5 * alpha) * 2.0 / alpha;
  const double cut = 4.0;
  const double mid = adaptive_simpson(
      [alpha](double tau) {
        return std::pow(tau, 0.5 * alpha - 1.0) * (-std::expm1(-0.25 / tau));
      },
      eps, cut, 1e-13);
  // Tail: expand 1 - exp(-u), u = 1/(4 tau) <= 1/16, term by term.
  double tail = 0.0;
  double coeff = 1.0;  // 1/(j! 4^j)
  for (int j = 1; j <= 40; ++j) {
    coeff /= 4.0 * static_cast<double>(j);
    const double term = coeff * std::pow(cut, 0.5 * alpha - j) /
                        (static_cast<double>(j) - 0.5 * alpha);
    tail += (j % 2 == 1) ? term : -term;
    if (std::abs(term) < 1e-18) break;
  }
  const double integral = head + mid + tail;
  const double pi_pow = dim == 1 ? std::sqrt(kTwoPi / 2.0)
                                 : kTwoPi / 2.0;  // pi^{n/2}
  return pi_pow / std::tgamma(0.5 * (dim + alpha)) * integral;
}

double alignment_constant(int dim, double alpha) {
  if (alpha <= 0.0 || alpha >= 2.0) {
    throw ConfigError("alpha must lie in (0,2)");
  }
  if (dim == 1) {
    const double pi = kTwoPi / 2.0;
    return pi / (std::tgamma(1.0 + alpha) * std::sin(0.5 * pi * alpha));
  }
  if (dim == 2) {
    return alignment_constant_quadrature(2, alpha);
  }
  throw ConfigError("dim must be 1 or 2");
}

}  // namespace flocksim
