#pragma once

#include <memory>

#include "ehd/grid.hpp"
#include "ehd/poisson.hpp"

namespace ehd {

/// Velocity (zero on boundary faces) and zero-mean pressure.
struct FluidState {
  MacVectorField u;
  ScalarField p;

  explicit FluidState(const Grid2D& g) : u(g), p(g) {}
  FluidState(MacVectorField u_, ScalarField p_) : u(std::move(u_)), p(std::move(p_)) {}
};

/// Electric body force (v - w) grad phi on interior faces, using the
/// face average of v - w and the face-centered difference of phi. This is
/// Lap phi grad phi with the Poisson equation substituted.
MacVectorField body_force(const ScalarField& v, const ScalarField& w, const ScalarField& phi);

/// div(grad phi (x) grad phi - 1/2 |grad phi|^2 I) on the interior faces that
/// are at least two cells from the wall; other faces are 0. Cross-check of
/// body_force only, never used for time stepping.
MacVectorField electric_stress_divergence(const ScalarField& phi);

/// (u . grad) u on the interior faces with first-order upwinding; the no-slip
/// wall enters through the ghost = -interior convention.
MacVectorField upwind_self_advection(const MacVectorField& u);

/// Chorin projection stepper. The viscous operators (I - dt Lap) and the
/// pressure Laplacian are factored once per dt.
class FluidStepper {
 public:
  explicit FluidStepper(const Grid2D& grid, SolveOptions projection = {});
  ~FluidStepper();
  FluidStepper(FluidStepper&&) noexcept;
  FluidStepper& operator=(FluidStepper&&) noexcept;

  /// Explicit advection, implicit viscosity, then the force and the pressure
  /// projection. Gradient forces are removed by the projection exactly.
  FluidState step(const FluidState& s, const MacVectorField& force, double dt);

  /// Removes the gradient part of u; returns the divergence-free field and the
  /// potential q with u_out = u - grad q.
  MacVectorField project(const MacVectorField& u, ScalarField* q = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One projection step (see FluidStepper::step).
FluidState step_velocity(const FluidState& s, const MacVectorField& force, double dt,
                         SolveOptions projection = {});

/// ||u||_L4 / (||u||_L2^{1/2} ||grad u||_L2^{1/2}), with |u| evaluated at cell
/// centers. Throws ZeroField for u == 0.
double ladyzhenskaya_ratio(const MacVectorField& u);

}  // namespace ehd
