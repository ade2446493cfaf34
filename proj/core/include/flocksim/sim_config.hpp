#pragma once

#include <cstdint>
#include <string>

namespace flocksim {

/// Flat run configuration; mirrors the `key = value` config file schema
/// one-to-one (dotted keys map to the init_* members).
struct SimConfig {
  int dim = 1;
  int n = 128;
  double alpha = 1.0;
  double t_end = 10.0;
  double cfl_advect = 0.4;
  double cfl_diffuse = 0.2;
  bool dealias = true;
  double output_cadence = 0.05;
  std::uint64_t seed = 12345;
  double gamma = 0.25;        // Hoelder exponent used by the [u]_{2+gamma} monitor
  int kernel_images = 20;     // lattice truncation radius of the kernel sum

  std::string preset = "perturbed_flock";  // or "flock"
  double init_rho_bar = 1.0;
  double init_a = 0.2;
  double init_eps = 0.05;
  int init_k0 = 2;
  double init_ubar1 = 0.5;
  double init_ubar2 = 0.0;

  /// Throws ConfigError naming the offending field when out of range.
  void validate() const;
};

}  // namespace flocksim
