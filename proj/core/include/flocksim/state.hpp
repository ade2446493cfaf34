#pragma once

#include "flocksim/field.hpp"

namespace flocksim {

/// One (rho, u, t) snapshot; the unit the stepper advances. rho must stay
/// strictly positive along a run (the stepper aborts otherwise).
struct State {
  ScalarField rho;
  VectorField u;
  double t = 0.0;
};

}  // namespace flocksim
