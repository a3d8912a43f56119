#pragma once

#include "ehd/grid.hpp"

namespace ehd {

/// The coupled unknowns <u, p, v, w, phi> at time t.
///
/// Invariants maintained by the driver: v, w >= 0; boundary faces of u are 0;
/// phi solves Lap_h phi = v - w with the Dirichlet ghost convention.
struct SystemState {
  MacVectorField u;
  ScalarField p;
  ScalarField v;
  ScalarField w;
  ScalarField phi;
  double t = 0.0;

  explicit SystemState(const Grid2D& g) : u(g), p(g), v(g), w(g), phi(g) {}

  const Grid2D& grid() const { return v.grid(); }
};

}  // namespace ehd
