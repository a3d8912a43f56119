#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ehd/state.hpp"
#include "ehd/stationary.hpp"

namespace ehd {

/// psi_r(s) = s log(s/r) - s + r, evaluated without cancellation near s = r.
/// psi_r(0) = r. Throws for r <= 0 or s < 0.
double psi(double s, double r);

/// Pieces of W = int psi(v) + psi(w) + 1/2 ||grad phi||^2 + 1/2 ||u||^2.
struct EnergyComponents {
  double entropy_v = 0.0;
  double entropy_w = 0.0;
  double electric = 0.0;
  double kinetic = 0.0;
  double total = 0.0;
};

EnergyComponents total_energy(const SystemState& s);

struct ProductionTerms {
  double cation = 0.0;   ///< int v |grad log(v e^-phi)|^2
  double anion = 0.0;    ///< int w |grad log(w e^phi)|^2
  double viscous = 0.0;  ///< ||grad u||^2
  double total() const { return cation + anion + viscous; }
};

/// Face-based quadrature of the dissipation: harmonic-mean face density times
/// the squared difference of the electrochemical potential. Faces touching a
/// density below 1e-300 contribute nothing; boundary faces carry no flux.
ProductionTerms production_terms(const SystemState& s);
double entropy_production(const SystemState& s);

/// W_rel = int psi_{v_inf}(v) + psi_{w_inf}(w) + 1/2 ||grad(phi - phi_inf)||^2 + 1/2 ||u||^2.
double relative_entropy(const SystemState& s, const StationarySolution& eq);

/// W_inf = int psi(v_inf) + psi(w_inf) + 1/2 ||grad phi_inf||^2.
double equilibrium_energy(const StationarySolution& eq);

/// Independent evaluations of the relative-entropy identities.
struct RelativeEntropyIdentities {
  double relative = 0.0;      ///< W_rel evaluated directly
  double w_plus_winf = 0.0;   ///< W + W_inf
  double w_minus_winf = 0.0;  ///< W - W_inf
  double maxwellian_form = 0.0;  ///< int psi_{v_M}(v) + psi_{w_M}(w) + 1/2|u|^2 + J[phi_inf] - J[phi]
};
RelativeEntropyIdentities relative_entropy_identities(const SystemState& s,
                                                      const StationarySolution& eq);

/// L = int 1/2|u|^2 + (v-v_inf)^2/(2 v_inf) + (w-w_inf)^2/(2 w_inf) + gradient_weight |grad(phi-phi_inf)|^2.
/// The default weight 1/2 is the quadratic part of W_rel.
double linearized_energy(const SystemState& s, const StationarySolution& eq,
                         double gradient_weight = 0.5);

/// E_p = int |u|^2 + |v-v_inf|^p / v_inf^{p-1} + |w-w_inf|^p / w_inf^{p-1} + |grad(phi-phi_inf)|^2,
/// p in {1, 2}.
double error_norm(const SystemState& s, const StationarySolution& eq, int p);

struct CsiszarKullback {
  double lhs = 0.0;  ///< ||v-v_inf||_1 + ||w-w_inf||_1 + ||grad(phi-phi_inf)||^2 + ||u||^2
  double w_rel = 0.0;
  /// lhs <= 4 w_rel (1 + 1e-6) + slack
  bool holds(double slack = 0.0) const { return lhs <= 4.0 * w_rel * (1.0 + 1e-6) + slack; }
};
CsiszarKullback csiszar_check(const SystemState& s, const StationarySolution& eq);

/// Mass-normalized Pinsker bound for one species pair:
///   ||v-v_inf||_1^2 / (2M) + ||w-w_inf||_1^2 / (2N) <= int psi_{v_inf}(v) + psi_{w_inf}(w).
struct PinskerBound {
  double lhs = 0.0;
  double rhs = 0.0;
};
PinskerBound pinsker_check(const SystemState& s, const StationarySolution& eq);

/// Least-squares fit of log y = intercept - lambda t.
struct DecayFit {
  double lambda = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  int points = 0;
};

/// Fits over samples with t in [window.first, window.second]; without a window
/// the first 10% of the time span is skipped. Throws EmptyWindow (fewer than 10
/// samples) or NonpositiveValues.
DecayFit fit_decay(std::span<const double> t, std::span<const double> y,
                   std::optional<std::pair<double, double>> window = std::nullopt);

struct PoincareEstimate {
  double constant = 0.0;  ///< c = 1 / mu_min
  double mu_min = 0.0;
  int iterations = 0;
};

/// Smallest c with int f^2 <= c int |grad(f rho)|^2 for every mean-zero cell
/// field f, gradients taken with zero-flux boundary faces. Inverse power
/// iteration on the mean-zero subspace with conjugate-gradient inner solves.
PoincareEstimate weighted_poincare_estimate(const ScalarField& rho, double tol = 1e-10,
                                            int max_iter = 500);

/// int f^2 / int |grad(f rho)|^2 for one field (zero-flux gradients).
double weighted_poincare_quotient(const ScalarField& f, const ScalarField& rho);

/// One diagnostics record; column order of the CSV matches the field order.
struct EnergyReport {
  double t = 0.0;
  double mass_v = 0.0;
  double mass_w = 0.0;
  double kinetic = 0.0;
  double electric = 0.0;
  double entropy_v = 0.0;
  double entropy_w = 0.0;
  double W = 0.0;
  double production = 0.0;
  double W_rel = 0.0;
  double L = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  double ck_lhs = 0.0;
  double lady_ratio = 0.0;  ///< 0 when u is identically zero
};

EnergyReport make_report(const SystemState& s, const StationarySolution& eq);

/// "t,mass_v,mass_w,kinetic,electric,entropy_v,entropy_w,W,production,W_rel,L,E1,E2,ck_lhs,lady_ratio"
const std::string& csv_header();
std::string csv_row(const EnergyReport& r);

}  // namespace ehd
