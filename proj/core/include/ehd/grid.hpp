#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ehd {

/// Uniform Cartesian mesh of the rectangle (0,lx) x (0,ly).
///
/// Cells are indexed (i, j) with i along x and j along y; cell centers sit at
/// ((i+1/2) hx, (j+1/2) hy). Scalars live at cell centers, velocity
/// components on the faces (MAC staggering).
class Grid2D {
 public:
  Grid2D(int nx, int ny, double lx = 1.0, double ly = 1.0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return lx_ / nx_; }
  double hy() const { return ly_ / ny_; }
  double cell_area() const { return hx() * hy(); }
  double area() const { return lx_ * ly_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(nx_) * ny_; }

  double xc(int i) const { return (i + 0.5) * hx(); }
  double yc(int j) const { return (j + 0.5) * hy(); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }

  bool operator==(const Grid2D&) const = default;

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

/// Cell-centered real field, stored row-major (j outer, i inner).
class ScalarField {
 public:
  explicit ScalarField(const Grid2D& grid, double value = 0.0);
  ScalarField(const Grid2D& grid, std::vector<double> data);

  /// Samples f at the cell centers.
  static ScalarField sample(const Grid2D& grid, const std::function<double(double, double)>& f);

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j) { return data_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return data_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

  bool all_finite() const;

 private:
  Grid2D grid_;
  std::vector<double> data_;
};

/// Face-staggered vector field. ux lives on the (nx+1) x ny vertical faces
/// (face i sits at x = i hx), uy on the nx x (ny+1) horizontal faces.
class MacVectorField {
 public:
  explicit MacVectorField(const Grid2D& grid);

  const Grid2D& grid() const { return grid_; }

  double& ux(int i, int j) { return ux_[static_cast<std::size_t>(j) * (grid_.nx() + 1) + i]; }
  double ux(int i, int j) const { return ux_[static_cast<std::size_t>(j) * (grid_.nx() + 1) + i]; }
  double& uy(int i, int j) { return uy_[static_cast<std::size_t>(j) * grid_.nx() + i]; }
  double uy(int i, int j) const { return uy_[static_cast<std::size_t>(j) * grid_.nx() + i]; }

  std::span<double> ux_values() { return ux_; }
  std::span<const double> ux_values() const { return ux_; }
  std::span<double> uy_values() { return uy_; }
  std::span<const double> uy_values() const { return uy_; }

  MacVectorField& operator+=(const MacVectorField& other);
  MacVectorField& operator-=(const MacVectorField& other);
  MacVectorField& operator*=(double s);

  friend MacVectorField operator+(MacVectorField a, const MacVectorField& b) { return a += b; }
  friend MacVectorField operator-(MacVectorField a, const MacVectorField& b) { return a -= b; }
  friend MacVectorField operator*(double s, MacVectorField a) { return a *= s; }

  /// Sets every boundary normal face to zero.
  void zero_boundary();
  /// Largest |value| over the boundary normal faces.
  double boundary_max_abs() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  Grid2D grid_;
  std::vector<double> ux_;
  std::vector<double> uy_;
};

/// Treatment of the boundary faces when differentiating a cell field.
enum class Boundary {
  kZeroFlux,      ///< boundary face gradients are 0 (Neumann / no-flux)
  kDirichletZero  ///< ghost = -interior, so the face value is 0
};

/// Midpoint quadrature: hx hy sum f.
double integrate(const ScalarField& f);

/// (integral |f|^p)^(1/p); p = infinity gives max |f|. Throws for p < 1.
double lp_norm(const ScalarField& f, double p);

/// L2 inner product of two cell fields.
double inner(const ScalarField& f, const ScalarField& g);

/// L2 inner product over faces (weight hx hy on every face).
double inner(const MacVectorField& a, const MacVectorField& b);

MacVectorField grad_to_faces(const ScalarField& f, Boundary bc = Boundary::kZeroFlux);

ScalarField div_from_faces(const MacVectorField& g);

/// ||grad f||^2 computed from face gradients. With kDirichletZero the wall
/// faces get half weight, which makes the value equal to -<f, Lap_h f>.
double h1_seminorm_sq(const ScalarField& f, Boundary bc);

/// 1/2 integral |u|^2 by face quadrature.
double kinetic_energy(const MacVectorField& u);

/// ||grad u||^2 for a velocity field with no-slip walls: the Dirichlet
/// face nodes are exact zeros, the tangential wall uses ghost = -interior
/// (half-weight wall term, matching the viscous operator).
double velocity_gradient_sq(const MacVectorField& u);

/// Face components averaged to cell centers.
void velocity_at_centers(const MacVectorField& u, ScalarField& cx, ScalarField& cy);

}  // namespace ehd
