#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ehd/grid.hpp"

namespace ehd {

/// How the 5-point stencil closes at one side of its box.
enum class Closure {
  kNoFlux,          ///< boundary face difference is 0 (homogeneous Neumann)
  kGhostDirichlet,  ///< ghost = -interior: zero sits on the boundary face
  kNodeDirichlet    ///< neighbor is an exact zero one spacing away (staggered wall face)
};

/// The operator A = shift I - Lap_h on an mx x my box of unknowns, row-major.
/// A is symmetric; it is positive definite unless every side is kNoFlux and
/// shift == 0, in which case constants span its null space.
struct ShiftedLaplacian {
  int mx = 0;
  int my = 0;
  double hx = 1.0;
  double hy = 1.0;
  double shift = 0.0;
  std::vector<double> cell_shift;  ///< optional extra diagonal, one entry per unknown
  Closure west = Closure::kGhostDirichlet;
  Closure east = Closure::kGhostDirichlet;
  Closure south = Closure::kGhostDirichlet;
  Closure north = Closure::kGhostDirichlet;

  static ShiftedLaplacian cells(const Grid2D& g, Closure all, double shift = 0.0);

  std::size_t size() const { return static_cast<std::size_t>(mx) * my; }
  bool singular() const;
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;
};

struct SolveOptions {
  double tol = 1e-10;  ///< relative: ||A x - b|| <= tol (1 + ||b||)
  int max_iter = 20000;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for A x = b. When A is singular
/// the iteration runs in the mean-zero subspace (b must already be mean-zero)
/// and the result has zero mean. x holds the initial guess on entry.
/// Throws NonConvergence after max_iter iterations.
SolveStats pcg(const ShiftedLaplacian& a, std::span<const double> b, std::span<double> x,
               const SolveOptions& opts);

/// Sparse LDL^T factorization of a ShiftedLaplacian, reusable across right-hand sides.
/// A singular (pure Neumann) operator is regularized by pinning the first unknown and
/// the returned solution is shifted to zero mean.
class FactoredLaplacian {
 public:
  explicit FactoredLaplacian(const ShiftedLaplacian& a);
  ~FactoredLaplacian();
  FactoredLaplacian(FactoredLaplacian&&) noexcept;
  FactoredLaplacian& operator=(FactoredLaplacian&&) noexcept;

  const ShiftedLaplacian& op() const { return op_; }
  void solve(std::span<const double> b, std::span<double> x) const;

 private:
  struct Impl;
  ShiftedLaplacian op_;
  std::unique_ptr<Impl> impl_;
};

/// Lap_h f with the Dirichlet ghost convention (zero on the boundary faces).
ScalarField dirichlet_laplacian(const ScalarField& f);

/// Lap_h f with zero-flux boundary faces; equals div_from_faces(grad_to_faces(f)).
ScalarField neumann_laplacian(const ScalarField& f);

/// Solves Lap_h phi = rhs with phi = 0 on the boundary faces.
ScalarField solve_dirichlet(const ScalarField& rhs, const SolveOptions& opts = {},
                            SolveStats* stats = nullptr);

/// Solves the pure Neumann problem Lap_h p = rhs; returns the zero-mean solution.
/// Throws Incompatible unless |integrate(rhs)| <= 1e-10 max(1, ||rhs||_1).
ScalarField solve_neumann(const ScalarField& rhs, const SolveOptions& opts = {},
                          SolveStats* stats = nullptr);

enum class SolverKind { kConjugateGradient, kCholesky };

/// Dirichlet and Neumann cell solves on a fixed grid. With kCholesky both
/// operators are factored once and every solve is checked against the same
/// residual contract as the iterative path.
class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid2D& grid, SolverKind kind = SolverKind::kCholesky,
                         SolveOptions opts = {});

  const Grid2D& grid() const { return grid_; }
  ScalarField dirichlet(const ScalarField& rhs) const;
  ScalarField neumann(const ScalarField& rhs) const;

 private:
  Grid2D grid_;
  SolverKind kind_;
  SolveOptions opts_;
  std::unique_ptr<FactoredLaplacian> dirichlet_;
  std::unique_ptr<FactoredLaplacian> neumann_;
};

/// ||A x - b||_2 / (1 + ||b||_2) in the box-weighted norm.
double relative_residual(const ShiftedLaplacian& a, std::span<const double> b,
                         std::span<const double> x);

}  // namespace ehd
