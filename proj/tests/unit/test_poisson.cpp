#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ehd/error.hpp"
#include "ehd/poisson.hpp"
#include "oracles.hpp"
#include "random_fields.hpp"

using namespace ehd;

namespace {

double manufactured_error(int n, SolverKind kind) {
  const Grid2D g(n, n);
  const ScalarField rhs = ScalarField::sample(g, oracle::manufactured_laplacian);
  const ScalarField exact = ScalarField::sample(g, oracle::manufactured);
  const PoissonSolver solver(g, kind, SolveOptions{1e-12, 20000});
  return lp_norm(solver.dirichlet(rhs) - exact, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST_CASE("manufactured solution converges at second order") {
  for (SolverKind kind : {SolverKind::kCholesky, SolverKind::kConjugateGradient}) {
    const double e16 = manufactured_error(16, kind);
    const double e32 = manufactured_error(32, kind);
    const double e64 = manufactured_error(64, kind);
    const double o1 = std::log2(e16 / e32), o2 = std::log2(e32 / e64);
    CHECK(o1 >= 1.8);
    CHECK(o1 <= 2.2);
    CHECK(o2 >= 1.8);
    CHECK(o2 <= 2.2);
  }
}

TEST_CASE("discrete maximum principle") {
  std::mt19937_64 rng(5);
  const Grid2D g(24, 20);
  const ScalarField rhs = testing_support::random_field(g, rng, -1.0, 0.0);
  const ScalarField phi = solve_dirichlet(rhs, SolveOptions{1e-12, 20000});
  for (double x : phi.values()) CHECK(x >= 0.0);
}

TEST_CASE("Dirichlet solve meets the residual contract") {
  std::mt19937_64 rng(8);
  const Grid2D g(17, 23, 1.0, 2.0);
  const ScalarField rhs = testing_support::random_field(g, rng);
  SolveStats stats;
  const ScalarField phi = solve_dirichlet(rhs, SolveOptions{1e-11, 20000}, &stats);
  CHECK(stats.residual <= 1e-11);
  const ScalarField r = dirichlet_laplacian(phi) - rhs;
  CHECK(lp_norm(r, 2.0) <= 1e-9 * (1.0 + lp_norm(rhs, 2.0)));
}

TEST_CASE("Cholesky and CG agree") {
  std::mt19937_64 rng(9);
  const Grid2D g(20, 16);
  const ScalarField rhs = testing_support::random_field(g, rng);
  const PoissonSolver chol(g, SolverKind::kCholesky, SolveOptions{1e-12, 20000});
  const PoissonSolver cg(g, SolverKind::kConjugateGradient, SolveOptions{1e-12, 20000});
  CHECK(lp_norm(chol.dirichlet(rhs) - cg.dirichlet(rhs), 2.0) <= 1e-9);
  ScalarField q = rhs;
  const double mean = integrate(q) / g.area();
  for (auto& x : q.values()) x -= mean;
  CHECK(lp_norm(chol.neumann(q) - cg.neumann(q), 2.0) <= 1e-9);
}

TEST_CASE("Neumann solve returns the zero-mean solution") {
  const Grid2D g(16, 16);
  const ScalarField rhs = ScalarField::sample(g, [](double x, double y) {
    return std::cos(std::numbers::pi * x) * std::cos(2.0 * std::numbers::pi * y);
  });
  const ScalarField p = solve_neumann(rhs, SolveOptions{1e-12, 20000});
  CHECK(std::abs(integrate(p)) <= 1e-12);
  CHECK(lp_norm(neumann_laplacian(p) - rhs, 2.0) <= 1e-10);
}

TEST_CASE("incompatible Neumann data is rejected") {
  const Grid2D g(8, 8);
  CHECK_THROWS_AS(solve_neumann(ScalarField(g, 1.0)), Incompatible);
  const PoissonSolver solver(g);
  CHECK_THROWS_AS(solver.neumann(ScalarField(g, 1.0)), Incompatible);
}

TEST_CASE("seminorms match the operators") {
  std::mt19937_64 rng(12);
  const Grid2D g(11, 9, 1.0, 0.7);
  const ScalarField f = testing_support::random_field(g, rng);
  const double d = h1_seminorm_sq(f, Boundary::kDirichletZero);
  CHECK(d == doctest::Approx(-inner(f, dirichlet_laplacian(f))).epsilon(1e-12));
  const double n = h1_seminorm_sq(f, Boundary::kZeroFlux);
  CHECK(n == doctest::Approx(-inner(f, neumann_laplacian(f))).epsilon(1e-12));
  CHECK(lp_norm(neumann_laplacian(f) - div_from_faces(grad_to_faces(f)), 2.0) <= 1e-10);
}

TEST_CASE("shifted operators are symmetric for every closure") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ShiftedLaplacian a;
  a.mx = 6;
  a.my = 5;
  a.hx = 0.3;
  a.hy = 0.2;
  a.shift = 0.5;
  a.west = Closure::kNoFlux;
  a.east = Closure::kNodeDirichlet;
  a.south = Closure::kGhostDirichlet;
  a.north = Closure::kNodeDirichlet;
  std::vector<double> x(a.size()), y(a.size()), ax(a.size()), ay(a.size());
  for (auto& v : x) v = d(rng);
  for (auto& v : y) v = d(rng);
  a.apply(x, ax);
  a.apply(y, ay);
  double xay = 0.0, yax = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    xay += x[k] * ay[k];
    yax += y[k] * ax[k];
  }
  CHECK(xay == doctest::Approx(yax).epsilon(1e-13));
  CHECK_FALSE(a.singular());
  const auto diag = a.diagonal();
  CHECK(diag[0] == doctest::Approx(0.5 + 1.0 / (0.3 * 0.3) + 3.0 / (0.2 * 0.2)));
}

TEST_CASE("factored and iterative solves of a shifted operator agree") {
  std::mt19937_64 rng(14);
  auto a = ShiftedLaplacian::cells(Grid2D(12, 10), Closure::kNodeDirichlet, 3.0);
  a.cell_shift.assign(a.size(), 0.25);
  std::vector<double> b(a.size()), x1(a.size(), 0.0), x2(a.size(), 0.0);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (auto& v : b) v = d(rng);
  pcg(a, b, x1, SolveOptions{1e-13, 10000});
  FactoredLaplacian(a).solve(b, x2);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(x1[k] == doctest::Approx(x2[k]).epsilon(1e-9));
  CHECK(relative_residual(a, b, x2) <= 1e-12);
}

TEST_CASE("pcg reports non-convergence") {
  auto a = ShiftedLaplacian::cells(Grid2D(32, 32), Closure::kGhostDirichlet);
  std::vector<double> b(a.size(), 1.0), x(a.size(), 0.0);
  CHECK_THROWS_AS(pcg(a, b, x, SolveOptions{1e-14, 2}), NonConvergence);
}
