#include "ehd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ehd/error.hpp"
#include "ehd/fluid.hpp"
#include "ehd/io.hpp"
#include "ehd/poisson.hpp"

namespace ehd {

namespace {

constexpr double kDensityFloor = 1e-300;

double entropy_integral(const ScalarField& c, const ScalarField* ref) {
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) sum += psi(c[k], ref ? (*ref)[k] : 1.0);
  return sum * c.grid().cell_area();
}

double species_production(const ScalarField& c, const ScalarField& phi, double sign) {
  const Grid2D& g = c.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  // electrochemical potential log c + sign phi
  ScalarField mu(g);
  for (std::size_t k = 0; k < c.size(); ++k) mu[k] = std::log(std::max(c[k], kDensityFloor)) + sign * phi[k];
  auto face = [&](std::size_t a, std::size_t b, double h) {
    const double ca = c[a], cb = c[b];
    if (ca < kDensityFloor || cb < kDensityFloor) return 0.0;
    const double harmonic = 2.0 * ca * cb / (ca + cb);
    const double d = (mu[b] - mu[a]) / h;
    return harmonic * d * d;
  };
  double sum = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) sum += face(g.index(i - 1, j), g.index(i, j), hx);
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) sum += face(g.index(i, j - 1), g.index(i, j), hy);
  return sum * g.cell_area();
}

double delta_gradient_sq(const ScalarField& phi, const ScalarField& phi_inf) {
  return h1_seminorm_sq(phi - phi_inf, Boundary::kDirichletZero);
}

}  // namespace

double psi(double s, double r) {
  if (!(r > 0.0)) throw InvalidArgument("psi requires r > 0");
  if (!(s >= 0.0)) throw InvalidArgument("psi requires s >= 0");
  if (s == 0.0) return r;
  const double x = (s - r) / r;
  if (std::abs(x) < 0.1) {
    // (1+x) log(1+x) - x = sum_{k>=2} (-1)^k x^k / (k (k-1))
    double term = x * x, sum = 0.0;
    for (int k = 2; k < 24; ++k) {
      sum += ((k % 2 == 0) ? term : -term) / (k * (k - 1.0));
      term *= x;
    }
    return r * sum;
  }
  return s * std::log(s / r) - s + r;
}

EnergyComponents total_energy(const SystemState& s) {
  EnergyComponents e;
  e.entropy_v = entropy_integral(s.v, nullptr);
  e.entropy_w = entropy_integral(s.w, nullptr);
  e.electric = 0.5 * h1_seminorm_sq(s.phi, Boundary::kDirichletZero);
  e.kinetic = kinetic_energy(s.u);
  e.total = e.entropy_v + e.entropy_w + e.electric + e.kinetic;
  return e;
}

ProductionTerms production_terms(const SystemState& s) {
  ProductionTerms p;
  p.cation = species_production(s.v, s.phi, -1.0);
  p.anion = species_production(s.w, s.phi, +1.0);
  p.viscous = velocity_gradient_sq(s.u);
  return p;
}

double entropy_production(const SystemState& s) { return production_terms(s).total(); }

double relative_entropy(const SystemState& s, const StationarySolution& eq) {
  return entropy_integral(s.v, &eq.v) + entropy_integral(s.w, &eq.w) +
         0.5 * delta_gradient_sq(s.phi, eq.phi) + kinetic_energy(s.u);
}

double equilibrium_energy(const StationarySolution& eq) {
  return entropy_integral(eq.v, nullptr) + entropy_integral(eq.w, nullptr) +
         0.5 * h1_seminorm_sq(eq.phi, Boundary::kDirichletZero);
}

RelativeEntropyIdentities relative_entropy_identities(const SystemState& s,
                                                      const StationarySolution& eq) {
  RelativeEntropyIdentities id;
  id.relative = relative_entropy(s, eq);
  const double W = total_energy(s).total;
  const double W_inf = equilibrium_energy(eq);
  id.w_plus_winf = W + W_inf;
  id.w_minus_winf = W - W_inf;
  const ScalarField vm = maxwellian(s.phi, eq.M, 1.0);
  const ScalarField wm = maxwellian(s.phi, eq.N, -1.0);
  id.maxwellian_form = entropy_integral(s.v, &vm) + entropy_integral(s.w, &wm) +
                       kinetic_energy(s.u) + functional_J(eq.phi, eq.M, eq.N) -
                       functional_J(s.phi, eq.M, eq.N);
  return id;
}

double linearized_energy(const SystemState& s, const StationarySolution& eq,
                         double gradient_weight) {
  double sum = 0.0;
  for (std::size_t k = 0; k < s.v.size(); ++k) {
    const double dv = s.v[k] - eq.v[k], dw = s.w[k] - eq.w[k];
    sum += dv * dv / (2.0 * eq.v[k]) + dw * dw / (2.0 * eq.w[k]);
  }
  return sum * s.grid().cell_area() + kinetic_energy(s.u) +
         gradient_weight * delta_gradient_sq(s.phi, eq.phi);
}

double error_norm(const SystemState& s, const StationarySolution& eq, int p) {
  if (p != 1 && p != 2) throw InvalidArgument("error_norm supports p = 1 or 2");
  double sum = 0.0;
  for (std::size_t k = 0; k < s.v.size(); ++k) {
    const double dv = std::abs(s.v[k] - eq.v[k]), dw = std::abs(s.w[k] - eq.w[k]);
    sum += (p == 1) ? dv + dw : dv * dv / eq.v[k] + dw * dw / eq.w[k];
  }
  return sum * s.grid().cell_area() + 2.0 * kinetic_energy(s.u) + delta_gradient_sq(s.phi, eq.phi);
}

CsiszarKullback csiszar_check(const SystemState& s, const StationarySolution& eq) {
  return {error_norm(s, eq, 1), relative_entropy(s, eq)};
}

PinskerBound pinsker_check(const SystemState& s, const StationarySolution& eq) {
  const double dv = lp_norm(s.v - eq.v, 1.0), dw = lp_norm(s.w - eq.w, 1.0);
  return {dv * dv / (2.0 * eq.M) + dw * dw / (2.0 * eq.N),
          entropy_integral(s.v, &eq.v) + entropy_integral(s.w, &eq.w)};
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> y,
                   std::optional<std::pair<double, double>> window) {
  if (t.size() != y.size()) throw InvalidArgument("time and value series differ in length");
  if (t.empty()) throw EmptyWindow("empty series");
  if (!window) {
    const double t0 = t.front(), t1 = t.back();
    window = {t0 + 0.1 * (t1 - t0), t1};
  }
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < window->first || t[k] > window->second) continue;
    if (!(y[k] > 0.0)) throw NonpositiveValues("decay fit needs positive values");
    xs.push_back(t[k]);
    ys.push_back(std::log(y[k]));
  }
  if (xs.size() < 10) throw EmptyWindow("decay fit needs at least 10 samples in the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (!(sxx > 0.0)) throw EmptyWindow("decay fit window has a single time value");
  const double slope = sxy / sxx;
  DecayFit fit;
  fit.lambda = -slope;
  fit.intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double e = ys[k] - (fit.intercept + slope * xs[k]);
    ss_res += e * e;
  }
  fit.r_squared = (syy > 0.0) ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.t_start = xs.front();
  fit.t_end = xs.back();
  fit.points = static_cast<int>(xs.size());
  return fit;
}

namespace {

void remove_mean(std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double& v : x) v -= m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// x -> P D L D P x, with L the zero-flux -Lap_h and D = diag(rho).
struct WeightedOperator {
  ShiftedLaplacian lap;
  std::vector<double> rho;

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    std::vector<double> z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) z[k] = rho[k] * x[k];
    lap.apply(z, y);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= rho[k];
    remove_mean(y);
  }
};

// CG on the mean-zero subspace; b must be mean-zero.
int solve_weighted(const WeightedOperator& a, const std::vector<double>& diag,
                   const std::vector<double>& b, std::vector<double>& x, double tol) {
  const std::size_t n = b.size();
  std::vector<double> r(b), z(n), p(n), q(n);
  std::fill(x.begin(), x.end(), 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return 0;
  for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
  remove_mean(z);
  p = z;
  double rz = dot(r, z);
  const int max_iter = 20 * static_cast<int>(n);
  for (int it = 1; it <= max_iter; ++it) {
    a.apply(p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    remove_mean(r);
    if (std::sqrt(dot(r, r)) <= tol * bnorm) {
      remove_mean(x);
      return it;
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
    remove_mean(z);
    const double rz_new = dot(r, z);
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + (rz_new / rz) * p[k];
    rz = rz_new;
  }
  throw NonConvergence("weighted Poincare inner solve", max_iter, 0.0);
}

}  // namespace

double weighted_poincare_quotient(const ScalarField& f, const ScalarField& rho) {
  ScalarField fr = f;
  for (std::size_t k = 0; k < fr.size(); ++k) fr[k] *= rho[k];
  const double grad = h1_seminorm_sq(fr, Boundary::kZeroFlux);
  return inner(f, f) / grad;
}

PoincareEstimate weighted_poincare_estimate(const ScalarField& rho, double tol, int max_iter) {
  const Grid2D& g = rho.grid();
  for (double r : rho.values())
    if (!(r > 0.0)) throw InvalidArgument("weight must be positive");
  WeightedOperator op{ShiftedLaplacian::cells(g, Closure::kNoFlux), {rho.values().begin(), rho.values().end()}};
  std::vector<double> diag = op.lap.diagonal();
  for (std::size_t k = 0; k < diag.size(); ++k) diag[k] *= op.rho[k] * op.rho[k];

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(g.cell_count()), y(x.size()), bx(x.size());
  for (double& v : x) v = dist(rng);
  remove_mean(x);
  double nrm = std::sqrt(dot(x, x));
  for (double& v : x) v /= nrm;

  double mu = INFINITY;
  for (int it = 1; it <= max_iter; ++it) {
    solve_weighted(op, diag, x, y, 1e-13);
    nrm = std::sqrt(dot(y, y));
    for (std::size_t k = 0; k < y.size(); ++k) x[k] = y[k] / nrm;
    op.apply(x, bx);
    const double mu_new = dot(x, bx);  // Rayleigh quotient, |x| = 1
    if (std::abs(mu_new - mu) <= tol * mu_new) return {1.0 / mu_new, mu_new, it};
    mu = mu_new;
  }
  throw NonConvergence("weighted Poincare eigen-iteration", max_iter, mu);
}

EnergyReport make_report(const SystemState& s, const StationarySolution& eq) {
  EnergyReport r;
  r.t = s.t;
  r.mass_v = integrate(s.v);
  r.mass_w = integrate(s.w);
  const EnergyComponents e = total_energy(s);
  r.kinetic = e.kinetic;
  r.electric = e.electric;
  r.entropy_v = e.entropy_v;
  r.entropy_w = e.entropy_w;
  r.W = e.total;
  r.production = entropy_production(s);
  r.W_rel = relative_entropy(s, eq);
  r.L = linearized_energy(s, eq);
  r.E1 = error_norm(s, eq, 1);
  r.E2 = error_norm(s, eq, 2);
  r.ck_lhs = r.E1;
  r.lady_ratio = (s.u.max_abs() > 0.0) ? ladyzhenskaya_ratio(s.u) : 0.0;
  return r;
}

const std::string& csv_header() {
  static const std::string header =
      "t,mass_v,mass_w,kinetic,electric,entropy_v,entropy_w,W,production,W_rel,L,E1,E2,ck_lhs,"
      "lady_ratio";
  return header;
}

std::string csv_row(const EnergyReport& r) {
  const double cols[] = {r.t,  r.mass_v, r.mass_w, r.kinetic, r.electric,
                         r.entropy_v, r.entropy_w, r.W, r.production, r.W_rel,
                         r.L,  r.E1, r.E2, r.ck_lhs, r.lady_ratio};
  std::string out;
  for (std::size_t k = 0; k < std::size(cols); ++k) {
    if (k) out += ',';
    out += format_real(cols[k]);
  }
  return out;
}

}  // namespace ehd
