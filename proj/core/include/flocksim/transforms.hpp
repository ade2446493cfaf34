#pragma once

#include <complex>
#include <vector>

#include "flocksim/torus_grid.hpp"

namespace flocksim {

/// Forward DFT of grid samples, normalized so that values(x_j) =
/// sum_k modes[k] exp(i k.x_j). A constant field c has mode 0 equal to c.
std::vector<std::complex<double>> dft_forward(const TorusGrid& grid,
                                              const std::vector<double>& values);

/// Inverse of dft_forward; imaginary residue of the synthesis is returned to
/// the caller untouched (ScalarField takes the real part).
std::vector<std::complex<double>> dft_backward(
    const TorusGrid& grid, const std::vector<std::complex<double>>& modes);

}  // namespace flocksim
