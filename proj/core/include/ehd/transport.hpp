#pragma once

#include <memory>

#include "ehd/grid.hpp"

namespace ehd {

/// Cation density v and anion density w.
struct ChargePair {
  ScalarField v;
  ScalarField w;
};

/// Species sign: the transport flux is -(grad c + sign c grad phi), so v
/// (sign -1) equilibrates to v ~ e^{+phi} and w (sign +1) to w ~ e^{-phi}.
inline constexpr int kCationSign = -1;
inline constexpr int kAnionSign = +1;

/// B(x) = x / (e^x - 1), B(0) = 1.
double bernoulli(double x);

/// Scharfetter-Gummel flux from the left (lower) cell to the right (upper) cell:
///   (1/h) [B(sign dpsi) cL - B(-sign dpsi) cR],   dpsi = phi_R - phi_L.
/// sign = -1 for v, +1 for w. Vanishes exactly on c ~ exp(-sign phi).
double sg_face_flux(double c_left, double c_right, double dpsi, double h, int sign);

/// div(u c) with first-order upwind face values; boundary faces carry no flux.
ScalarField upwind_advection(const ScalarField& c, const MacVectorField& u);

/// Largest dt for which the explicit upwind update keeps every cell nonnegative.
double advective_dt_limit(const MacVectorField& u);

/// Backward-Euler Nernst-Planck stepper with cached sparse symbolic analysis.
///
/// Each species solves
///   (c' - c*)/dt + div F_SG(c') = 0,   c* = c - dt div(u c)_upwind,
/// with zero flux on every boundary face. In the Slotboom variable
/// g = c exp(sign phi) the system is symmetric positive definite and an
/// M-matrix, so c' stays positive for any dt and the total mass telescopes.
class ChargeStepper {
 public:
  explicit ChargeStepper(const Grid2D& grid);
  ~ChargeStepper();
  ChargeStepper(ChargeStepper&&) noexcept;
  ChargeStepper& operator=(ChargeStepper&&) noexcept;

  ScalarField step_species(const ScalarField& c, const ScalarField& phi, int sign,
                           const MacVectorField& u, double dt);
  ChargePair step(const ChargePair& c, const ScalarField& phi, const MacVectorField& u, double dt);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One implicit step of both species (see ChargeStepper).
ChargePair step_charges(const ChargePair& c, const ScalarField& phi, const MacVectorField& u,
                        double dt);

}  // namespace ehd
