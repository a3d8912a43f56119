#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ehd/error.hpp"
#include "ehd/grid.hpp"
#include "random_fields.hpp"

using namespace ehd;

TEST_CASE("grid geometry and validation") {
  const Grid2D g(4, 5, 2.0, 1.0);
  CHECK(g.hx() == doctest::Approx(0.5));
  CHECK(g.hy() == doctest::Approx(0.2));
  CHECK(g.cell_count() == 20);
  CHECK(g.xc(0) == doctest::Approx(0.25));
  CHECK(g.index(1, 2) == 9);
  CHECK_THROWS_AS(Grid2D(2, 8), InvalidArgument);
  CHECK_THROWS_AS(Grid2D(8, 8, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid2D(8, 8, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("midpoint quadrature") {
  const Grid2D g(16, 16);
  const ScalarField x = ScalarField::sample(g, [](double x, double) { return x; });
  CHECK(integrate(x) == doctest::Approx(0.5).epsilon(1e-14));
  const ScalarField one(Grid2D(7, 9, 3.0, 2.0), 1.0);
  CHECK(integrate(one) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("lp norms") {
  const Grid2D g(8, 6, 3.0, 1.0);
  const ScalarField two(g, 2.0);
  CHECK(lp_norm(two, 2.0) == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(lp_norm(two, 1.0) == doctest::Approx(6.0));
  ScalarField f(g);
  f(3, 2) = -5.0;
  CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == 5.0);
  CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidArgument);
}

TEST_CASE("summation by parts holds exactly for both closures") {
  std::mt19937_64 rng(7);
  const Grid2D g(9, 7, 1.3, 0.8);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField f = testing_support::random_field(g, rng);
    const MacVectorField u = testing_support::random_faces(g, rng);
    const double lhs = inner(grad_to_faces(f), u);
    const double rhs = -inner(f, div_from_faces(u));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    // wall faces of u are zero, so the Dirichlet gradient pairs the same way
    const double lhs_d = inner(grad_to_faces(f, Boundary::kDirichletZero), u);
    CHECK(std::abs(lhs_d - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("gradient of a constant vanishes only with zero-flux faces") {
  const Grid2D g(6, 6);
  const ScalarField c(g, 3.0);
  CHECK(grad_to_faces(c).max_abs() == 0.0);
  CHECK(h1_seminorm_sq(c, Boundary::kZeroFlux) == 0.0);
  CHECK(h1_seminorm_sq(c, Boundary::kDirichletZero) > 0.0);
}

TEST_CASE("vector field helpers") {
  const Grid2D g(5, 4);
  std::mt19937_64 rng(3);
  MacVectorField u(g);
  for (auto& x : u.ux_values()) x = 1.0;
  CHECK(u.boundary_max_abs() == 1.0);
  u.zero_boundary();
  CHECK(u.boundary_max_abs() == 0.0);
  CHECK(u.ux(2, 1) == 1.0);
  // 1/2 * sum over 4 interior columns * 4 rows * hx hy
  CHECK(kinetic_energy(u) == doctest::Approx(0.5 * 16 * g.cell_area()));
  const MacVectorField r = testing_support::random_faces(g, rng);
  CHECK(velocity_gradient_sq(r) > 0.0);
  CHECK(velocity_gradient_sq(MacVectorField(g)) == 0.0);
  CHECK((2.0 * r - r - r).max_abs() == 0.0);
}

TEST_CASE("cell-centered velocity averages adjacent faces") {
  const Grid2D g(4, 4);
  MacVectorField u(g);
  u.ux(1, 0) = 2.0;
  ScalarField cx(g), cy(g);
  velocity_at_centers(u, cx, cy);
  CHECK(cx(0, 0) == 1.0);
  CHECK(cx(1, 0) == 1.0);
  CHECK(cy(0, 0) == 0.0);
}
