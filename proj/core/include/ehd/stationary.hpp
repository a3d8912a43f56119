#pragma once

#include <filesystem>
#include <vector>

#include "ehd/grid.hpp"

namespace ehd {

/// Equilibrium <phi_inf, v_inf, w_inf> for species masses M (v) and N (w).
struct StationarySolution {
  ScalarField phi;
  ScalarField v;
  ScalarField w;
  double M = 0.0;
  double N = 0.0;
  double residual = 0.0;  ///< L2 norm of the Euler-Lagrange residual at exit
  int iterations = 0;
  std::vector<double> objective_history;  ///< J at every accepted iterate, starting point first
};

struct PbOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double inner_tol = 1e-12;  ///< relative tolerance of each Newton linear solve
};

/// log of integral exp(sign phi), evaluated with log-sum-exp.
double log_integral_exp(const ScalarField& phi, double sign);

/// mass exp(sign phi) / integral exp(sign phi). Integrates to mass up to roundoff.
ScalarField maxwellian(const ScalarField& phi, double mass, double sign);

/// J[phi] = 1/2 ||grad phi||^2 + M log int e^phi + N log int e^-phi, with the
/// gradient taken under the Dirichlet ghost convention.
double functional_J(const ScalarField& phi, double M, double N);

/// Lap_h phi - M e^phi / int e^phi + N e^-phi / int e^-phi (negative L2 gradient of J).
ScalarField pb_residual(const ScalarField& phi, double M, double N);

/// Minimizes J by damped quasi-Newton iteration starting from `initial` (0 if null).
/// The Jacobian keeps the diagonal part of the exponential terms and drops the
/// rank-one normalization terms, so every linear solve is a symmetric M-matrix.
/// Throws LineSearchStall or NonConvergence.
StationarySolution solve_pb(double M, double N, const Grid2D& grid, const PbOptions& opts = {},
                            const ScalarField* initial = nullptr);

/// Coefficients of the equivalent form Lap phi = alpha sinh(phi - beta):
///   alpha = 2 sqrt(M N / (int e^phi int e^-phi)),
///   beta  = 1/2 log(N int e^phi / (M int e^-phi)).
struct SinhCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
};
SinhCoefficients sinh_coefficients(const ScalarField& phi, double M, double N);

/// ||Lap_h phi - alpha sinh(phi - beta)||_2 for the solution's potential.
double sinh_form_check(const StationarySolution& s);
double sinh_form_residual(const ScalarField& phi, double M, double N);

/// L2 norm over interior faces of (v - w)_face grad phi - grad(v + w).
double stationary_pressure_check(const StationarySolution& s);

/// Writes phi.txt, v.txt, w.txt (matrix format) and metadata.txt into dir.
void write_stationary(const std::filesystem::path& dir, const StationarySolution& s);

}  // namespace ehd
