#include "ehd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ehd/error.hpp"

namespace ehd {

Grid2D::Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 3 || ny < 3) throw InvalidArgument("grid needs at least 3 cells per direction");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw InvalidArgument("grid side lengths must be positive and finite");
}

ScalarField::ScalarField(const Grid2D& grid, double value)
    : grid_(grid), data_(grid.cell_count(), value) {}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> data)
    : grid_(grid), data_(std::move(data)) {
  if (data_.size() != grid_.cell_count())
    throw InvalidArgument("field data length does not match the grid");
}

ScalarField ScalarField::sample(const Grid2D& grid,
                                const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) out(i, j) = f(grid.xc(i), grid.yc(j));
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("fields live on different grids");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("fields live on different grids");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

bool ScalarField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

MacVectorField::MacVectorField(const Grid2D& grid)
    : grid_(grid),
      ux_(static_cast<std::size_t>(grid.nx() + 1) * grid.ny(), 0.0),
      uy_(static_cast<std::size_t>(grid.nx()) * (grid.ny() + 1), 0.0) {}

MacVectorField& MacVectorField::operator+=(const MacVectorField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("fields live on different grids");
  for (std::size_t k = 0; k < ux_.size(); ++k) ux_[k] += other.ux_[k];
  for (std::size_t k = 0; k < uy_.size(); ++k) uy_[k] += other.uy_[k];
  return *this;
}

MacVectorField& MacVectorField::operator-=(const MacVectorField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("fields live on different grids");
  for (std::size_t k = 0; k < ux_.size(); ++k) ux_[k] -= other.ux_[k];
  for (std::size_t k = 0; k < uy_.size(); ++k) uy_[k] -= other.uy_[k];
  return *this;
}

MacVectorField& MacVectorField::operator*=(double s) {
  for (double& x : ux_) x *= s;
  for (double& x : uy_) x *= s;
  return *this;
}

void MacVectorField::zero_boundary() {
  const int nx = grid_.nx(), ny = grid_.ny();
  for (int j = 0; j < ny; ++j) ux(0, j) = ux(nx, j) = 0.0;
  for (int i = 0; i < nx; ++i) uy(i, 0) = uy(i, ny) = 0.0;
}

double MacVectorField::boundary_max_abs() const {
  const int nx = grid_.nx(), ny = grid_.ny();
  double m = 0.0;
  for (int j = 0; j < ny; ++j) m = std::max({m, std::abs(ux(0, j)), std::abs(ux(nx, j))});
  for (int i = 0; i < nx; ++i) m = std::max({m, std::abs(uy(i, 0)), std::abs(uy(i, ny))});
  return m;
}

double MacVectorField::max_abs() const {
  double m = 0.0;
  for (double x : ux_) m = std::max(m, std::abs(x));
  for (double x : uy_) m = std::max(m, std::abs(x));
  return m;
}

bool MacVectorField::all_finite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(ux_.begin(), ux_.end(), finite) && std::all_of(uy_.begin(), uy_.end(), finite);
}

double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (double x : f.values()) sum += x;
  return sum * f.grid().cell_area();
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (double x : f.values()) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1");
  double sum = 0.0;
  if (p == 1.0) {
    for (double x : f.values()) sum += std::abs(x);
    return sum * f.grid().cell_area();
  }
  if (p == 2.0) {
    for (double x : f.values()) sum += x * x;
    return std::sqrt(sum * f.grid().cell_area());
  }
  for (double x : f.values()) sum += std::pow(std::abs(x), p);
  return std::pow(sum * f.grid().cell_area(), 1.0 / p);
}

double inner(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("fields live on different grids");
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * g[k];
  return sum * f.grid().cell_area();
}

double inner(const MacVectorField& a, const MacVectorField& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
  double sum = 0.0;
  auto ax = a.ux_values(), bx = b.ux_values();
  for (std::size_t k = 0; k < ax.size(); ++k) sum += ax[k] * bx[k];
  auto ay = a.uy_values(), by = b.uy_values();
  for (std::size_t k = 0; k < ay.size(); ++k) sum += ay[k] * by[k];
  return sum * a.grid().cell_area();
}

MacVectorField grad_to_faces(const ScalarField& f, Boundary bc) {
  const Grid2D& g = f.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  MacVectorField out(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) out.ux(i, j) = (f(i, j) - f(i - 1, j)) / hx;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) out.uy(i, j) = (f(i, j) - f(i, j - 1)) / hy;
  if (bc == Boundary::kDirichletZero) {
    // ghost = -interior
    for (int j = 0; j < ny; ++j) {
      out.ux(0, j) = 2.0 * f(0, j) / hx;
      out.ux(nx, j) = -2.0 * f(nx - 1, j) / hx;
    }
    for (int i = 0; i < nx; ++i) {
      out.uy(i, 0) = 2.0 * f(i, 0) / hy;
      out.uy(i, ny) = -2.0 * f(i, ny - 1) / hy;
    }
  }
  return out;
}

ScalarField div_from_faces(const MacVectorField& u) {
  const Grid2D& g = u.grid();
  const double hx = g.hx(), hy = g.hy();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) / hx + (u.uy(i, j + 1) - u.uy(i, j)) / hy;
  return out;
}

double h1_seminorm_sq(const ScalarField& f, Boundary bc) {
  const MacVectorField g = grad_to_faces(f, bc);
  double sum = inner(g, g);
  if (bc == Boundary::kDirichletZero) {
    // Wall faces carry half a cell of quadrature, so that the seminorm equals
    // -<f, Lap_h f> for the ghost closure.
    const Grid2D& gr = f.grid();
    double wall = 0.0;
    for (int j = 0; j < gr.ny(); ++j) wall += g.ux(0, j) * g.ux(0, j) + g.ux(gr.nx(), j) * g.ux(gr.nx(), j);
    for (int i = 0; i < gr.nx(); ++i) wall += g.uy(i, 0) * g.uy(i, 0) + g.uy(i, gr.ny()) * g.uy(i, gr.ny());
    sum -= 0.5 * wall * gr.cell_area();
  }
  return sum;
}

double kinetic_energy(const MacVectorField& u) { return 0.5 * inner(u, u); }

double velocity_gradient_sq(const MacVectorField& u) {
  const Grid2D& g = u.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  double sum = 0.0;
  // ux: x-differences between consecutive faces, y-differences across rows
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double d = (u.ux(i + 1, j) - u.ux(i, j)) / hx;
      sum += d * d;
    }
  for (int i = 1; i < nx; ++i) {
    for (int j = 1; j < ny; ++j) {
      const double d = (u.ux(i, j) - u.ux(i, j - 1)) / hy;
      sum += d * d;
    }
    const double lo = 2.0 * u.ux(i, 0) / hy;
    const double hi = 2.0 * u.ux(i, ny - 1) / hy;
    sum += 0.5 * (lo * lo + hi * hi);
  }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double d = (u.uy(i, j + 1) - u.uy(i, j)) / hy;
      sum += d * d;
    }
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double d = (u.uy(i, j) - u.uy(i - 1, j)) / hx;
      sum += d * d;
    }
    const double lo = 2.0 * u.uy(0, j) / hx;
    const double hi = 2.0 * u.uy(nx - 1, j) / hx;
    sum += 0.5 * (lo * lo + hi * hi);
  }
  return sum * g.cell_area();
}

void velocity_at_centers(const MacVectorField& u, ScalarField& cx, ScalarField& cy) {
  const Grid2D& g = u.grid();
  cx = ScalarField(g);
  cy = ScalarField(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      cx(i, j) = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
      cy(i, j) = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
    }
}

}  // namespace ehd
