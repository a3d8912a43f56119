#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ehd/error.hpp"
#include "ehd/transport.hpp"
#include "oracles.hpp"
#include "random_fields.hpp"

using namespace ehd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField smooth_potential(const Grid2D& g, double amp) {
  return ScalarField::sample(g, [amp](double x, double y) {
    return amp * std::sin(2.0 * x + 0.3) * std::cos(3.0 * y - 0.2);
  });
}

// Divergence-free face field from a nodal stream function that vanishes on the wall.
MacVectorField swirl(const Grid2D& g, double amp) {
  MacVectorField u(g);
  auto psi = [&](int i, int j) {
    return amp * std::sin(std::numbers::pi * i * g.hx() / g.lx()) *
           std::sin(std::numbers::pi * j * g.hy() / g.ly());
  };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) u.ux(i, j) = (psi(i, j + 1) - psi(i, j)) / g.hy();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) u.uy(i, j) = -(psi(i + 1, j) - psi(i, j)) / g.hx();
  return u;
}

double free_energy(const ScalarField& c, const ScalarField& phi, int sign) {
  ScalarField f(c.grid());
  for (std::size_t k = 0; k < c.size(); ++k)
    f[k] = (c[k] > 0.0 ? c[k] * std::log(c[k]) : 0.0) - c[k] + sign * c[k] * phi[k];
  return integrate(f);
}

}  // namespace

TEST_CASE("Bernoulli function") {
  CHECK(bernoulli(0.0) == 1.0);
  CHECK(bernoulli(1.0) == doctest::Approx(oracle::kBernoulliAtOne).epsilon(1e-15));
  for (double x : {1e-12, 1e-6, 0.3, 5.0, 40.0}) CHECK(bernoulli(-x) - bernoulli(x) == doctest::Approx(x));
  // continuous through the series branch
  CHECK(bernoulli(1e-10) == doctest::Approx(bernoulli(1.0000001e-10)).epsilon(1e-15));
  CHECK(bernoulli(800.0) >= 0.0);
  CHECK(std::isfinite(bernoulli(-700.0)));
}

TEST_CASE("Scharfetter-Gummel flux") {
  // no drift: plain difference
  CHECK(sg_face_flux(2.0, 1.0, 0.0, 0.5, kAnionSign) == doctest::Approx(2.0));
  // the Boltzmann profile carries no flux
  const double dpsi = 0.7;
  CHECK(std::abs(sg_face_flux(1.0, std::exp(dpsi), dpsi, 0.1, kCationSign)) <= 1e-14);
  CHECK(std::abs(sg_face_flux(1.0, std::exp(-dpsi), dpsi, 0.1, kAnionSign)) <= 1e-14);
  CHECK(std::abs(sg_face_flux(std::exp(-0.3), std::exp(-0.3 - 40.0), 40.0, 1.0, kAnionSign)) <= 1e-14);
}

TEST_CASE("upwind advection conserves mass and respects its step limit") {
  std::mt19937_64 rng(21);
  const Grid2D g(12, 10);
  const ScalarField c = testing_support::random_field(g, rng, 0.0, 1.0);
  const MacVectorField u = testing_support::random_faces(g, rng);
  CHECK(std::abs(integrate(upwind_advection(c, u))) <= 1e-13);
  CHECK(advective_dt_limit(MacVectorField(g)) == kInf);
  CHECK(advective_dt_limit(u) > 0.0);
}

TEST_CASE("discrete Boltzmann profiles are exact steady states") {
  const Grid2D g(32, 32);
  const ScalarField phi = smooth_potential(g, 1.5);
  ScalarField v(g), w(g);
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = 0.3 * std::exp(phi[k]);
    w[k] = 0.2 * std::exp(-phi[k]);
  }
  ChargeStepper stepper(g);
  ChargePair c{v, w};
  const MacVectorField u(g);
  for (int n = 0; n < 100; ++n) c = stepper.step(c, phi, u, 0.05);
  CHECK(lp_norm(c.v - v, kInf) <= 1e-12);
  CHECK(lp_norm(c.w - w, kInf) <= 1e-12);
}

TEST_CASE("mass conservation and positivity with drift and flow") {
  std::mt19937_64 rng(22);
  const Grid2D g(24, 20, 1.0, 0.8);
  const ScalarField phi = smooth_potential(g, 4.0);
  const MacVectorField u = swirl(g, 0.05);
  ChargePair c{testing_support::random_field(g, rng, 0.0, 1.0),
               testing_support::random_field(g, rng, 0.0, 1.0)};
  c.v(3, 3) = 0.0;
  const double mv = integrate(c.v), mw = integrate(c.w);
  const double dt = 0.9 * advective_dt_limit(u);
  ChargeStepper stepper(g);
  for (int n = 0; n < 50; ++n) {
    c = stepper.step(c, phi, u, dt);
    for (std::size_t k = 0; k < c.v.size(); ++k) {
      CHECK(c.v[k] >= 0.0);
      CHECK(c.w[k] >= 0.0);
    }
  }
  CHECK(std::abs(integrate(c.v) - mv) <= 1e-13 * mv);
  CHECK(std::abs(integrate(c.w) - mw) <= 1e-13 * mw);
}

TEST_CASE("free energy decreases in a fixed potential") {
  std::mt19937_64 rng(23);
  const Grid2D g(20, 20);
  const ScalarField phi = smooth_potential(g, 2.0);
  ScalarField c = testing_support::random_field(g, rng, 0.1, 1.0);
  ChargeStepper stepper(g);
  const MacVectorField u(g);
  for (int sign : {kCationSign, kAnionSign}) {
    double f = free_energy(c, phi, sign);
    ScalarField cs = c;
    for (int n = 0; n < 20; ++n) {
      cs = stepper.step_species(cs, phi, sign, u, 0.01);
      const double fn = free_energy(cs, phi, sign);
      CHECK(fn <= f + 1e-14);
      f = fn;
    }
  }
}

TEST_CASE("step rejects time steps beyond the advective limit") {
  const Grid2D g(16, 16);
  const MacVectorField u = swirl(g, 1.0);
  const ScalarField c(g, 1.0), phi(g);
  ChargeStepper stepper(g);
  const double limit = advective_dt_limit(u);
  CHECK_THROWS_AS(stepper.step_species(c, phi, kAnionSign, u, 2.0 * limit), CflViolation);
  CHECK_NOTHROW(stepper.step_species(c, phi, kAnionSign, u, 0.5 * limit));
  const ChargePair p = step_charges(ChargePair{c, c}, phi, MacVectorField(g), 0.1);
  CHECK(lp_norm(p.v - c, kInf) <= 1e-14);
}
