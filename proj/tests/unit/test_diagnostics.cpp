#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "ehd/diagnostics.hpp"
#include "ehd/error.hpp"
#include "ehd/fluid.hpp"
#include "ehd/poisson.hpp"
#include "oracles.hpp"
#include "random_fields.hpp"

using namespace ehd;

namespace {

// A state with the given densities, the consistent potential and u.
SystemState make_state(const ScalarField& v, const ScalarField& w, const MacVectorField* u = nullptr) {
  SystemState s(v.grid());
  s.v = v;
  s.w = w;
  s.phi = PoissonSolver(v.grid()).dirichlet(v - w);
  if (u) s.u = *u;
  return s;
}

// Mass-preserving multiplicative perturbation of the equilibrium.
SystemState perturbed(const StationarySolution& eq, double eps, std::mt19937_64& rng) {
  const Grid2D& g = eq.phi.grid();
  const ScalarField eta = testing_support::random_field(g, rng);
  ScalarField v = eq.v, w = eq.w;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] *= 1.0 + eps * eta[k];
    w[k] *= 1.0 - eps * eta[k];
  }
  v *= eq.M / integrate(v);
  w *= eq.N / integrate(w);
  return make_state(v, w);
}

}  // namespace

TEST_CASE("psi") {
  CHECK(psi(1.0, 2.0) == doctest::Approx(oracle::kPsiOneOverTwo).epsilon(1e-15));
  CHECK(psi(0.0, 0.7) == 0.7);
  CHECK(psi(0.7, 0.7) == 0.0);
  // quadratic near s = r without cancellation
  CHECK(psi(1.0 + 1e-9, 1.0) == doctest::Approx(0.5e-18).epsilon(1e-6));
  // the series branch meets the closed form
  CHECK(psi(1.0999999, 1.0) == doctest::Approx(1.1000001 * std::log(1.1000001) - 0.1000001).epsilon(1e-6));
  CHECK_THROWS_AS(psi(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(psi(-1.0, 1.0), InvalidArgument);
}

TEST_CASE("energy of a uniform neutral state") {
  const Grid2D g(8, 8, 2.0, 1.0);
  const SystemState s = make_state(ScalarField(g, 0.5), ScalarField(g, 0.5));
  const EnergyComponents e = total_energy(s);
  CHECK(e.electric == 0.0);
  CHECK(e.kinetic == 0.0);
  CHECK(e.entropy_v == doctest::Approx(2.0 * psi(0.5, 1.0)));
  CHECK(e.total == doctest::Approx(4.0 * psi(0.5, 1.0)));
  CHECK(entropy_production(s) == 0.0);
}

TEST_CASE("equilibrium annihilates the production") {
  const Grid2D g(16, 16);
  const ScalarField phi = ScalarField::sample(g, [](double x, double y) { return std::sin(3 * x) * y; });
  SystemState s(g);
  s.phi = phi;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    s.v[k] = 0.2 * std::exp(phi[k]);
    s.w[k] = 0.3 * std::exp(-phi[k]);
  }
  const ProductionTerms p = production_terms(s);
  CHECK(p.cation <= 1e-26);
  CHECK(p.anion <= 1e-26);
  CHECK(p.viscous == 0.0);
}

TEST_CASE("production vanishes on faces touching empty cells") {
  const Grid2D g(6, 6);
  SystemState s(g);
  s.v(2, 2) = 1.0;
  CHECK(entropy_production(s) == 0.0);
  CHECK(std::isfinite(total_energy(s).total));
}

TEST_CASE("relative entropy identities") {
  std::mt19937_64 rng(41);
  const Grid2D g(24, 24);
  const StationarySolution eq = solve_pb(0.4, 0.9, g, PbOptions{1e-12, 50, 1e-13});
  FluidStepper fluid(g);
  for (int trial = 0; trial < 5; ++trial) {
    SystemState s = perturbed(eq, 0.5, rng);
    s.u = fluid.project(testing_support::random_faces(g, rng));
    const RelativeEntropyIdentities id = relative_entropy_identities(s, eq);
    CHECK(id.relative > 0.0);
    CHECK(id.relative == doctest::Approx(id.w_minus_winf).epsilon(1e-9));
    CHECK(id.relative == doctest::Approx(id.maxwellian_form).epsilon(1e-9));
    // the sum W + W_inf is not the relative entropy
    CHECK(std::abs(id.w_plus_winf - id.relative) > 0.1);
  }
  const SystemState at_eq = make_state(eq.v, eq.w);
  CHECK(std::abs(relative_entropy(at_eq, eq)) <= 1e-12);
  CHECK(equilibrium_energy(eq) == doctest::Approx(total_energy(at_eq).total).epsilon(1e-12));
}

TEST_CASE("linearized energy is the quadratic part of the relative entropy") {
  std::mt19937_64 rng(42);
  const Grid2D g(20, 20);
  const StationarySolution eq = solve_pb(0.05, 0.1, g, PbOptions{1e-12, 50, 1e-13});
  double prev_gap = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    std::mt19937_64 local(rng);
    const SystemState s = perturbed(eq, eps, local);
    const double wrel = relative_entropy(s, eq), l = linearized_energy(s, eq);
    const double gap = std::abs(wrel - l) / l;
    CHECK(gap < prev_gap);
    prev_gap = gap;
    CHECK(error_norm(s, eq, 2) == doctest::Approx(2.0 * l).epsilon(1e-12));
  }
  CHECK(prev_gap <= 1e-2);
  CHECK_THROWS_AS(error_norm(make_state(eq.v, eq.w), eq, 3), InvalidArgument);
}

TEST_CASE("Pinsker holds and the linear L1 bound fails near equilibrium") {
  std::mt19937_64 rng(43);
  const Grid2D g(16, 16);
  const StationarySolution eq = solve_pb(0.05, 0.1, g, PbOptions{1e-12, 50, 1e-13});
  for (int trial = 0; trial < 20; ++trial) {
    const SystemState s = perturbed(eq, 0.9 * (trial + 1) / 20.0, rng);
    const PinskerBound p = pinsker_check(s, eq);
    CHECK(p.lhs <= p.rhs * (1.0 + 1e-12));
  }
  // W_rel is quadratic in the deviation, the L1 distance linear
  const SystemState near = perturbed(eq, 1e-4, rng);
  const CsiszarKullback ck = csiszar_check(near, eq);
  CHECK(ck.lhs == doctest::Approx(error_norm(near, eq, 1)));
  CHECK_FALSE(ck.holds());
}

TEST_CASE("fit_decay") {
  std::vector<double> t, y;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.05 * k);
    y.push_back(3.0 * std::exp(-2.0 * t.back()));
  }
  DecayFit f = fit_decay(t, y);
  CHECK(f.lambda == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.t_start == doctest::Approx(0.5));
  CHECK(f.points == 91);
  f = fit_decay(t, y, std::make_pair(1.0, 2.0));
  CHECK(f.points == 21);
  CHECK_THROWS_AS(fit_decay(t, y, std::make_pair(1.0, 1.2)), EmptyWindow);
  CHECK_THROWS_AS(fit_decay(std::vector<double>{}, std::vector<double>{}), EmptyWindow);
  y[60] = 0.0;
  CHECK_THROWS_AS(fit_decay(t, y), NonpositiveValues);
  // constant series: zero rate, perfect fit
  const std::vector<double> c(t.size(), 1.0);
  CHECK(fit_decay(t, c).lambda == doctest::Approx(0.0));
}

TEST_CASE("weighted Poincare constant") {
  const PoincareEstimate e16 = weighted_poincare_estimate(ScalarField(Grid2D(16, 16), 1.0));
  const PoincareEstimate e32 = weighted_poincare_estimate(ScalarField(Grid2D(32, 32), 1.0));
  CHECK(std::abs(e32.constant - oracle::kInvPiSquared) < std::abs(e16.constant - oracle::kInvPiSquared));
  CHECK(e32.constant == doctest::Approx(oracle::kInvPiSquared).epsilon(0.02));

  std::mt19937_64 rng(44);
  const Grid2D g(16, 16);
  const ScalarField rho = testing_support::random_field(g, rng, 0.5, 1.5);
  const PoincareEstimate e = weighted_poincare_estimate(rho);
  for (int trial = 0; trial < 50; ++trial) {
    ScalarField f = testing_support::random_field(g, rng);
    const double mean = integrate(f) / g.area();
    for (auto& x : f.values()) x -= mean;
    CHECK(weighted_poincare_quotient(f, rho) <= e.constant * (1.0 + 1e-8));
  }
  CHECK_THROWS_AS(weighted_poincare_estimate(ScalarField(g, 0.0)), InvalidArgument);
}

TEST_CASE("CSV report") {
  CHECK(csv_header() ==
        "t,mass_v,mass_w,kinetic,electric,entropy_v,entropy_w,W,production,W_rel,L,E1,E2,ck_lhs,lady_ratio");
  const Grid2D g(8, 8);
  const StationarySolution eq = solve_pb(0.3, 0.3, g);
  SystemState s = make_state(eq.v, eq.w);
  s.t = 0.25;
  const EnergyReport r = make_report(s, eq);
  CHECK(r.mass_v == doctest::Approx(0.3));
  CHECK(std::abs(r.W_rel) <= 1e-15);
  CHECK(r.lady_ratio == 0.0);
  const std::string row = csv_row(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 14);
  CHECK(row.rfind("0.25,", 0) == 0);
}
