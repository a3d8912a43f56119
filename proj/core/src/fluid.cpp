#include "ehd/fluid.hpp"

#include <cmath>

#include "ehd/error.hpp"

namespace ehd {

MacVectorField body_force(const ScalarField& v, const ScalarField& w, const ScalarField& phi) {
  const Grid2D& g = phi.grid();
  if (!(v.grid() == g) || !(w.grid() == g)) throw InvalidArgument("fields live on different grids");
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  MacVectorField f(g);
  auto q = [&](int i, int j) { return v(i, j) - w(i, j); };
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      f.ux(i, j) = 0.5 * (q(i - 1, j) + q(i, j)) * (phi(i, j) - phi(i - 1, j)) / hx;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      f.uy(i, j) = 0.5 * (q(i, j - 1) + q(i, j)) * (phi(i, j) - phi(i, j - 1)) / hy;
  return f;
}

MacVectorField electric_stress_divergence(const ScalarField& phi) {
  const Grid2D& g = phi.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  // Cell-centered central gradients, valid away from the wall.
  ScalarField px(g), py(g);
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) {
      px(i, j) = (phi(i + 1, j) - phi(i - 1, j)) / (2 * hx);
      py(i, j) = (phi(i, j + 1) - phi(i, j - 1)) / (2 * hy);
    }
  auto s = [&](int i, int j) { return 0.5 * (px(i, j) * px(i, j) - py(i, j) * py(i, j)); };
  auto m = [&](int i, int j) { return px(i, j) * py(i, j); };
  MacVectorField out(g);
  for (int j = 2; j < ny - 2; ++j)
    for (int i = 2; i < nx - 1; ++i) {
      const double dmx = 0.5 * ((m(i - 1, j + 1) - m(i - 1, j - 1)) + (m(i, j + 1) - m(i, j - 1))) / (2 * hy);
      out.ux(i, j) = (s(i, j) - s(i - 1, j)) / hx + dmx;
    }
  for (int j = 2; j < ny - 1; ++j)
    for (int i = 2; i < nx - 2; ++i) {
      const double dmy = 0.5 * ((m(i + 1, j - 1) - m(i - 1, j - 1)) + (m(i + 1, j) - m(i - 1, j))) / (2 * hx);
      out.uy(i, j) = dmy - (s(i, j) - s(i, j - 1)) / hy;
    }
  return out;
}

MacVectorField upwind_self_advection(const MacVectorField& u) {
  const Grid2D& g = u.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  MacVectorField out(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double a = u.ux(i, j);
      const double b = 0.25 * (u.uy(i - 1, j) + u.uy(i, j) + u.uy(i - 1, j + 1) + u.uy(i, j + 1));
      const double dudx = a > 0.0 ? (a - u.ux(i - 1, j)) / hx : (u.ux(i + 1, j) - a) / hx;
      const double below = j > 0 ? u.ux(i, j - 1) : -a;
      const double above = j + 1 < ny ? u.ux(i, j + 1) : -a;
      const double dudy = b > 0.0 ? (a - below) / hy : (above - a) / hy;
      out.ux(i, j) = a * dudx + b * dudy;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double b = u.uy(i, j);
      const double a = 0.25 * (u.ux(i, j - 1) + u.ux(i + 1, j - 1) + u.ux(i, j) + u.ux(i + 1, j));
      const double dvdy = b > 0.0 ? (b - u.uy(i, j - 1)) / hy : (u.uy(i, j + 1) - b) / hy;
      const double left = i > 0 ? u.uy(i - 1, j) : -b;
      const double right = i + 1 < nx ? u.uy(i + 1, j) : -b;
      const double dvdx = a > 0.0 ? (b - left) / hx : (right - b) / hx;
      out.uy(i, j) = a * dvdx + b * dvdy;
    }
  return out;
}

struct FluidStepper::Impl {
  Impl(const Grid2D& g, SolveOptions o) : grid(g), opts(o), pressure(g, SolverKind::kCholesky, o) {}

  void ensure_viscous(double dt) {
    if (ux_solver && dt == cached_dt) return;
    ShiftedLaplacian ax;
    ax.mx = grid.nx() - 1;
    ax.my = grid.ny();
    ax.hx = grid.hx();
    ax.hy = grid.hy();
    ax.shift = 1.0 / dt;
    ax.west = ax.east = Closure::kNodeDirichlet;
    ax.south = ax.north = Closure::kGhostDirichlet;
    ShiftedLaplacian ay = ax;
    ay.mx = grid.nx();
    ay.my = grid.ny() - 1;
    ay.west = ay.east = Closure::kGhostDirichlet;
    ay.south = ay.north = Closure::kNodeDirichlet;
    ux_solver = std::make_unique<FactoredLaplacian>(ax);
    uy_solver = std::make_unique<FactoredLaplacian>(ay);
    cached_dt = dt;
  }

  Grid2D grid;
  SolveOptions opts;
  PoissonSolver pressure;
  std::unique_ptr<FactoredLaplacian> ux_solver;
  std::unique_ptr<FactoredLaplacian> uy_solver;
  double cached_dt = 0.0;
};

FluidStepper::FluidStepper(const Grid2D& grid, SolveOptions projection)
    : impl_(std::make_unique<Impl>(grid, projection)) {}
FluidStepper::~FluidStepper() = default;
FluidStepper::FluidStepper(FluidStepper&&) noexcept = default;
FluidStepper& FluidStepper::operator=(FluidStepper&&) noexcept = default;

MacVectorField FluidStepper::project(const MacVectorField& u, ScalarField* q) const {
  ScalarField pot = impl_->pressure.neumann(div_from_faces(u));
  MacVectorField out = u - grad_to_faces(pot, Boundary::kZeroFlux);
  out.zero_boundary();
  if (q) *q = std::move(pot);
  return out;
}

FluidState FluidStepper::step(const FluidState& s, const MacVectorField& force, double dt) {
  const Grid2D& g = impl_->grid;
  if (!(s.u.grid() == g) || !(force.grid() == g)) throw InvalidArgument("fields live on different grids");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const int nx = g.nx(), ny = g.ny();

  // (i) explicit advection
  MacVectorField star = s.u;
  if (s.u.max_abs() > 0.0) {
    const MacVectorField adv = upwind_self_advection(s.u);
    star -= dt * adv;
  }
  star.zero_boundary();

  // (ii) implicit viscosity: (1/dt - Lap) u = u*/dt on the interior faces
  impl_->ensure_viscous(dt);
  MacVectorField visc(g);
  {
    std::vector<double> b(static_cast<std::size_t>(nx - 1) * ny), x(b.size());
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) b[static_cast<std::size_t>(j) * (nx - 1) + i - 1] = star.ux(i, j) / dt;
    impl_->ux_solver->solve(b, x);
    const double res = relative_residual(impl_->ux_solver->op(), b, x);
    if (!(res <= impl_->opts.tol)) throw NonConvergence("viscous solve (x)", 1, res);
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i < nx; ++i) visc.ux(i, j) = x[static_cast<std::size_t>(j) * (nx - 1) + i - 1];
  }
  {
    std::vector<double> b(static_cast<std::size_t>(nx) * (ny - 1)), x(b.size());
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) b[static_cast<std::size_t>(j - 1) * nx + i] = star.uy(i, j) / dt;
    impl_->uy_solver->solve(b, x);
    const double res = relative_residual(impl_->uy_solver->op(), b, x);
    if (!(res <= impl_->opts.tol)) throw NonConvergence("viscous solve (y)", 1, res);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) visc.uy(i, j) = x[static_cast<std::size_t>(j - 1) * nx + i];
  }

  // The force enters after the viscous solve, so that its gradient part is
  // removed exactly by the projection.
  visc += dt * force;
  visc.zero_boundary();

  // (iii) projection; p = q/dt with u = u** - dt grad p
  ScalarField q(g);
  MacVectorField u = project(visc, &q);
  q *= 1.0 / dt;
  return FluidState(std::move(u), std::move(q));
}

FluidState step_velocity(const FluidState& s, const MacVectorField& force, double dt,
                         SolveOptions projection) {
  FluidStepper stepper(s.u.grid(), projection);
  return stepper.step(s, force, dt);
}

double ladyzhenskaya_ratio(const MacVectorField& u) {
  ScalarField cx(u.grid()), cy(u.grid());
  velocity_at_centers(u, cx, cy);
  double s2 = 0.0, s4 = 0.0;
  for (std::size_t k = 0; k < cx.size(); ++k) {
    const double m2 = cx[k] * cx[k] + cy[k] * cy[k];
    s2 += m2;
    s4 += m2 * m2;
  }
  const double area = u.grid().cell_area();
  const double grad = velocity_gradient_sq(u);
  if (s2 == 0.0 || grad == 0.0) throw ZeroField("Ladyzhenskaya ratio of the zero field");
  const double l4 = std::pow(s4 * area, 0.25);
  const double l2 = std::sqrt(s2 * area);
  return l4 / std::sqrt(l2 * std::sqrt(grad));
}

}  // namespace ehd
