#include "ehd/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ehd/error.hpp"
#include "ehd/io.hpp"
#include "ehd/poisson.hpp"

namespace ehd {

double log_integral_exp(const ScalarField& phi, double sign) {
  double m = -INFINITY;
  for (double x : phi.values()) m = std::max(m, sign * x);
  double sum = 0.0;
  for (double x : phi.values()) sum += std::exp(sign * x - m);
  return m + std::log(sum * phi.grid().cell_area());
}

ScalarField maxwellian(const ScalarField& phi, double mass, double sign) {
  const double log_z = log_integral_exp(phi, sign);
  ScalarField out(phi.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = mass * std::exp(sign * phi[k] - log_z);
  return out;
}

double functional_J(const ScalarField& phi, double M, double N) {
  if (!(M > 0.0) || !(N > 0.0)) throw InvalidArgument("masses must be positive");
  return 0.5 * h1_seminorm_sq(phi, Boundary::kDirichletZero) + M * log_integral_exp(phi, 1.0) +
         N * log_integral_exp(phi, -1.0);
}

ScalarField pb_residual(const ScalarField& phi, double M, double N) {
  ScalarField r = dirichlet_laplacian(phi);
  r -= maxwellian(phi, M, 1.0);
  r += maxwellian(phi, N, -1.0);
  return r;
}

StationarySolution solve_pb(double M, double N, const Grid2D& grid, const PbOptions& opts,
                            const ScalarField* initial) {
  if (!(M > 0.0) || !(N > 0.0)) throw InvalidArgument("masses must be positive");
  if (!(opts.tol > 0.0)) throw InvalidArgument("tolerance must be positive");

  ScalarField phi = initial ? *initial : ScalarField(grid);
  if (!(phi.grid() == grid)) throw InvalidArgument("initial guess lives on another grid");

  StationarySolution sol{phi, ScalarField(grid), ScalarField(grid), M, N, 0.0, 0, {}};
  double J = functional_J(phi, M, N);
  sol.objective_history.push_back(J);
  ScalarField r = pb_residual(phi, M, N);
  double res = lp_norm(r, 2.0);

  int it = 0;
  while (res > opts.tol) {
    if (it == opts.max_iter) throw NonConvergence("Poisson-Boltzmann Newton iteration", it, res);
    ++it;
    // (-Lap + diag(v_M + w_M)) delta = R
    auto a = ShiftedLaplacian::cells(grid, Closure::kGhostDirichlet);
    const ScalarField vm = maxwellian(phi, M, 1.0), wm = maxwellian(phi, N, -1.0);
    a.cell_shift.resize(grid.cell_count());
    for (std::size_t k = 0; k < a.cell_shift.size(); ++k) a.cell_shift[k] = vm[k] + wm[k];
    ScalarField delta(grid);
    pcg(a, r.values(), delta.values(), SolveOptions{opts.inner_tol * std::max(1.0, res), 100000});

    // Armijo backtracking on J; dJ/dalpha = -<R, delta> < 0.
    const double slope = -inner(r, delta);
    const double slack = 1e-13 * (1.0 + std::abs(J));
    double alpha = 1.0;
    for (;;) {
      ScalarField trial = phi;
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += alpha * delta[k];
      const double Jt = functional_J(trial, M, N);
      if (Jt <= J + 1e-4 * alpha * slope + slack) {
        phi = std::move(trial);
        J = Jt;
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-12) throw LineSearchStall(J, alpha);
    }
    sol.objective_history.push_back(J);
    r = pb_residual(phi, M, N);
    res = lp_norm(r, 2.0);
  }

  sol.phi = std::move(phi);
  sol.v = maxwellian(sol.phi, M, 1.0);
  sol.w = maxwellian(sol.phi, N, -1.0);
  sol.residual = res;
  sol.iterations = it;
  return sol;
}

SinhCoefficients sinh_coefficients(const ScalarField& phi, double M, double N) {
  const double lp = log_integral_exp(phi, 1.0), lm = log_integral_exp(phi, -1.0);
  SinhCoefficients c;
  c.alpha = 2.0 * std::exp(0.5 * (std::log(M) + std::log(N) - lp - lm));
  c.beta = 0.5 * (std::log(N) + lp - std::log(M) - lm);
  return c;
}

double sinh_form_residual(const ScalarField& phi, double M, double N) {
  const SinhCoefficients c = sinh_coefficients(phi, M, N);
  ScalarField r = dirichlet_laplacian(phi);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c.alpha * std::sinh(phi[k] - c.beta);
  return lp_norm(r, 2.0);
}

double sinh_form_check(const StationarySolution& s) { return sinh_form_residual(s.phi, s.M, s.N); }

double stationary_pressure_check(const StationarySolution& s) {
  const Grid2D& g = s.phi.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  double sum = 0.0;
  auto q = [&](int i, int j) { return s.v(i, j) - s.w(i, j); };
  auto p = [&](int i, int j) { return s.v(i, j) + s.w(i, j); };
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double e = 0.5 * (q(i - 1, j) + q(i, j)) * (s.phi(i, j) - s.phi(i - 1, j)) / hx -
                       (p(i, j) - p(i - 1, j)) / hx;
      sum += e * e;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double e = 0.5 * (q(i, j - 1) + q(i, j)) * (s.phi(i, j) - s.phi(i, j - 1)) / hy -
                       (p(i, j) - p(i, j - 1)) / hy;
      sum += e * e;
    }
  return std::sqrt(sum * g.cell_area());
}

void write_stationary(const std::filesystem::path& dir, const StationarySolution& s) {
  std::filesystem::create_directories(dir);
  write_field(dir / "phi.txt", s.phi);
  write_field(dir / "v.txt", s.v);
  write_field(dir / "w.txt", s.w);
  std::ofstream meta(dir / "metadata.txt");
  if (!meta) throw IoError("cannot write " + (dir / "metadata.txt").string());
  meta << "M = " << format_real(s.M) << '\n'
       << "N = " << format_real(s.N) << '\n'
       << "residual = " << format_real(s.residual) << '\n'
       << "iterations = " << s.iterations << '\n'
       << "phi_max_abs = " << format_real(lp_norm(s.phi, INFINITY)) << '\n'
       << "nx = " << s.phi.grid().nx() << '\n'
       << "ny = " << s.phi.grid().ny() << '\n'
       << "lx = " << format_real(s.phi.grid().lx()) << '\n'
       << "ly = " << format_real(s.phi.grid().ly()) << '\n';
}

}  // namespace ehd
