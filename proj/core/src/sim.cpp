#include "ehd/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "ehd/error.hpp"
#include "ehd/io.hpp"

namespace ehd {

namespace {

ScalarField gaussian(const Grid2D& g, double cx, double cy, double sigma, double mass) {
  ScalarField f = ScalarField::sample(g, [&](double x, double y) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return std::exp(-0.5 * r2 / (sigma * sigma));
  });
  f *= mass / integrate(f);
  return f;
}

Grid2D config_grid(const SimConfig& cfg) { return Grid2D(cfg.nx, cfg.ny, cfg.lx, cfg.ly); }

SystemState with_charges(const Grid2D& g, ScalarField v, ScalarField w, double tol_poisson) {
  SystemState s(g);
  s.v = std::move(v);
  s.w = std::move(w);
  PoissonSolver ps(g, SolverKind::kCholesky, SolveOptions{tol_poisson, 20000});
  s.phi = ps.dirichlet(s.v - s.w);
  return s;
}

SystemState symmetric_null(const SimConfig& cfg) {
  const Grid2D g = config_grid(cfg);
  const ScalarField c(g, cfg.M / g.area());
  return with_charges(g, c, c, cfg.tol_poisson);
}

SystemState relax_small_mass(const SimConfig& cfg) {
  const Grid2D g = config_grid(cfg);
  const double sigma = 0.1 * std::min(cfg.lx, cfg.ly);
  return with_charges(g, gaussian(g, 0.35 * cfg.lx, 0.5 * cfg.ly, sigma, cfg.M),
                      gaussian(g, 0.65 * cfg.lx, 0.5 * cfg.ly, sigma, cfg.N), cfg.tol_poisson);
}

SystemState vortex_charge(const SimConfig& cfg) {
  SystemState s = relax_small_mass(cfg);
  const Grid2D& g = s.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  // Stream function on the nodes, zero on the wall; the MAC differences of a
  // nodal stream function are divergence free to roundoff.
  const double amp = cfg.velocity * cfg.ly / (2.0 * std::numbers::pi);
  auto psi = [&](int i, int j) {
    return amp * std::sin(std::numbers::pi * i * hx / cfg.lx) *
           std::sin(2.0 * std::numbers::pi * j * hy / cfg.ly);
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) s.u.ux(i, j) = (psi(i, j + 1) - psi(i, j)) / hy;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) s.u.uy(i, j) = -(psi(i + 1, j) - psi(i, j)) / hx;
  s.u.zero_boundary();
  return s;
}

SystemState near_equilibrium(const SimConfig& cfg) {
  const Grid2D g = config_grid(cfg);
  if (!(std::abs(cfg.epsilon) < 1.0)) throw InvalidArgument("initial.epsilon must satisfy |epsilon| < 1");
  const StationarySolution eq = solve_pb(cfg.M, cfg.N, g, PbOptions{cfg.tol_pb, 50, 1e-13});
  if (cfg.epsilon == 0.0) return with_charges(g, eq.v, eq.w, cfg.tol_poisson);
  const ScalarField eta = ScalarField::sample(g, [&](double x, double y) {
    return std::cos(std::numbers::pi * x / cfg.lx) * std::cos(std::numbers::pi * y / cfg.ly);
  });
  ScalarField v = eq.v, w = eq.w;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] *= 1.0 + cfg.epsilon * eta[k];
    w[k] *= 1.0 - cfg.epsilon * eta[k];
  }
  v *= cfg.M / integrate(v);
  w *= cfg.N / integrate(w);
  return with_charges(g, std::move(v), std::move(w), cfg.tol_poisson);
}

SystemState from_files(const SimConfig& cfg) {
  if (cfg.v0_file.empty() || cfg.w0_file.empty())
    throw InvalidArgument("preset 'file' needs initial.v0 and initial.w0");
  const Grid2D g = config_grid(cfg);
  ScalarField v = read_field(cfg.v0_file, g);
  ScalarField w = read_field(cfg.w0_file, g);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!(v[k] >= 0.0) || !(w[k] >= 0.0)) throw InvalidArgument("initial densities must be nonnegative");
  if (!(integrate(v) > 0.0) || !(integrate(w) > 0.0))
    throw InvalidArgument("initial densities must have positive mass");
  return with_charges(g, std::move(v), std::move(w), cfg.tol_poisson);
}

double max_face_gradient(const ScalarField& phi) {
  const MacVectorField g = grad_to_faces(phi, Boundary::kDirichletZero);
  return g.max_abs();
}

}  // namespace

Simulator::Simulator(const Grid2D& grid, double tol_poisson, double tol_projection)
    : grid_(grid),
      poisson_(grid, SolverKind::kCholesky, SolveOptions{tol_poisson, 20000}),
      charges_(grid),
      fluid_(grid, SolveOptions{tol_projection, 20000}) {}

ScalarField Simulator::potential(const ScalarField& v, const ScalarField& w) const {
  return poisson_.dirichlet(v - w);
}

double Simulator::stable_dt(const SystemState& s) const {
  const double h = std::min(grid_.hx(), grid_.hy());
  const double speed = std::max(s.u.max_abs(), max_face_gradient(s.phi));
  const double cfl = speed > 0.0 ? h / speed : std::numeric_limits<double>::infinity();
  return std::min(cfl, advective_dt_limit(s.u));
}

void Simulator::step(SystemState& s, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const double limit = stable_dt(s);
  if (dt > limit) throw CflViolation(dt, limit);

  s.phi = potential(s.v, s.w);
  ChargePair c = charges_.step(ChargePair{s.v, s.w}, s.phi, s.u, dt);
  const MacVectorField f = body_force(c.v, c.w, s.phi);
  FluidState fs = fluid_.step(FluidState(s.u, s.p), f, dt);
  s.v = std::move(c.v);
  s.w = std::move(c.w);
  s.u = std::move(fs.u);
  s.p = std::move(fs.p);
  s.t += dt;
  s.phi = potential(s.v, s.w);
}

SystemState step(const SystemState& s, double dt) {
  Simulator sim(s.grid());
  SystemState out = s;
  sim.step(out, dt);
  return out;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = {
      {"symmetric-null", "v0 = w0 = M/|Omega| uniform (N is set to M), u0 = 0: a fixed point",
       symmetric_null},
      {"relax-small-mass", "separated gaussian bumps for v0 (mass M) and w0 (mass N), u0 = 0",
       relax_small_mass},
      {"vortex-charge", "relax-small-mass charges plus a divergence-free double vortex u0",
       vortex_charge},
      {"near-equilibrium",
       "v_inf (1 + eps eta), w_inf (1 - eps eta) renormalized to M, N, u0 = 0", near_equilibrium},
      {"file", "v0, w0 read from the matrix files initial.v0 and initial.w0, u0 = 0", from_files},
  };
  return p;
}

SystemState make_initial_state(const SimConfig& cfg) {
  for (const auto& p : presets())
    if (p.name == cfg.preset) return p.make(cfg);
  throw InvalidArgument("unknown preset '" + cfg.preset + "'");
}

std::vector<std::filesystem::path> write_snapshot(const std::filesystem::path& dir,
                                                  const SystemState& s, int step) {
  const std::string k = std::to_string(step);
  const Grid2D& g = s.grid();
  std::vector<std::filesystem::path> out;
  auto field = [&](const std::string& name, const ScalarField& f) {
    out.push_back(dir / (name + "_" + k + ".txt"));
    write_field(out.back(), f);
  };
  field("v", s.v);
  field("w", s.w);
  field("phi", s.phi);
  field("p", s.p);
  out.push_back(dir / ("ux_" + k + ".txt"));
  write_matrix(out.back(), s.u.ux_values(), g.ny(), g.nx() + 1);
  out.push_back(dir / ("uy_" + k + ".txt"));
  write_matrix(out.back(), s.u.uy_values(), g.ny() + 1, g.nx());
  return out;
}

SystemState read_snapshot(const std::filesystem::path& dir, int step, const Grid2D& grid) {
  const std::string k = std::to_string(step);
  SystemState s(grid);
  s.v = read_field(dir / ("v_" + k + ".txt"), grid);
  s.w = read_field(dir / ("w_" + k + ".txt"), grid);
  if (std::filesystem::exists(dir / ("p_" + k + ".txt"))) s.p = read_field(dir / ("p_" + k + ".txt"), grid);
  auto velocity = [&](const std::string& name, std::span<double> dst, int rows, int cols) {
    const auto path = dir / (name + "_" + k + ".txt");
    if (!std::filesystem::exists(path)) return;
    int r = 0, c = 0;
    const std::vector<double> data = read_matrix(path, r, c);
    if (r != rows || c != cols) throw IoError(path.string() + ": shape does not match the grid");
    std::copy(data.begin(), data.end(), dst.begin());
  };
  velocity("ux", s.u.ux_values(), grid.ny(), grid.nx() + 1);
  velocity("uy", s.u.uy_values(), grid.ny() + 1, grid.nx());
  PoissonSolver ps(grid);
  s.phi = ps.dirichlet(s.v - s.w);
  return s;
}

RunResult run(const SimConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  return run(cfg, make_initial_state(cfg), opts);
}

RunResult run(const SimConfig& cfg, SystemState initial, const RunOptions& opts) {
  cfg.validate();
  const Grid2D grid = initial.grid();
  const double M = integrate(initial.v), N = integrate(initial.w);
  if (opts.log && M + N > cfg.rho0_warn)
    *opts.log << "warning: total charge " << M + N << " exceeds masses.rho0_warn = " << cfg.rho0_warn
              << "\n";

  const std::filesystem::path out_dir = cfg.output_dir;
  RunResult res{{}, {}, initial, solve_pb(M, N, grid, PbOptions{cfg.tol_pb, 50, 1e-13}), {}, 0};

  std::ofstream csv;
  if (opts.write_files) {
    write_stationary(out_dir / "stationary", res.equilibrium);
    std::filesystem::create_directories(out_dir);
    csv.open(out_dir / "diagnostics.csv");
    if (!csv) throw IoError("cannot write " + (out_dir / "diagnostics.csv").string());
    csv << csv_header() << '\n';
  }
  auto record = [&](const SystemState& s) {
    res.series.push_back(make_report(s, res.equilibrium));
    if (opts.write_files) csv << csv_row(res.series.back()) << '\n';
  };
  auto snapshot = [&](const SystemState& s, int k) {
    if (!opts.write_files) return;
    const auto files = write_snapshot(out_dir / "snapshots", s, k);
    res.snapshots.insert(res.snapshots.end(), files.begin(), files.end());
  };

  SystemState& s = res.final_state;
  const double t_end = s.t + cfg.t_max;
  if (cfg.t_max == 0.0) {
    snapshot(s, 0);
    return res;
  }

  Simulator sim(grid, cfg.tol_poisson, cfg.tol_projection);
  record(s);
  if (cfg.snapshot_every > 0) snapshot(s, 0);
  int last_snapshot = 0;
  bool done = false;
  while (!done) {
    double dt = std::min(cfg.dt, cfg.cfl_safety * sim.stable_dt(s));
    const double remaining = t_end - s.t;
    if (remaining <= dt * (1.0 + 1e-8)) {
      dt = remaining;
      done = true;
    }
    sim.step(s, dt);
    if (done) s.t = t_end;
    ++res.steps;
    res.dt.push_back(dt);
    if (res.steps % cfg.record_every == 0 || done) record(s);
    if (cfg.snapshot_every > 0 && res.steps % cfg.snapshot_every == 0) {
      snapshot(s, res.steps);
      last_snapshot = res.steps;
    }
    if (opts.log && cfg.record_every > 0 && res.steps % 100 == 0)
      *opts.log << "step " << res.steps << "  t = " << s.t << "\n";
  }
  if (last_snapshot != res.steps) snapshot(s, res.steps);
  return res;
}

std::vector<PropertyResult> check_properties(const SimConfig& cfg, const SystemState& initial,
                                             int steps) {
  const Grid2D grid = initial.grid();
  const double h2 = grid.hx() * grid.hx() + grid.hy() * grid.hy();
  const double M = integrate(initial.v), N = integrate(initial.w);
  const StationarySolution eq = solve_pb(M, N, grid, PbOptions{cfg.tol_pb, 50, 1e-13});
  const double w_inf = equilibrium_energy(eq);

  Simulator sim(grid, cfg.tol_poisson, cfg.tol_projection);
  SystemState s = initial;

  double min_density = std::numeric_limits<double>::infinity();
  double mass_drift = 0.0, max_increment = -std::numeric_limits<double>::infinity();
  double min_production = std::numeric_limits<double>::infinity();
  double min_wrel = std::numeric_limits<double>::infinity();
  double identity_gap = 0.0, ck_excess = -std::numeric_limits<double>::infinity();
  double pinsker_excess = -std::numeric_limits<double>::infinity();
  double lady = 0.0, boundary = 0.0, divergence = 0.0, poisson = 0.0;

  auto observe = [&](const SystemState& st) {
    for (std::size_t k = 0; k < st.v.size(); ++k) min_density = std::min({min_density, st.v[k], st.w[k]});
    mass_drift = std::max({mass_drift, std::abs(integrate(st.v) - M) / M, std::abs(integrate(st.w) - N) / N});
    min_production = std::min(min_production, entropy_production(st));
    const double wrel = relative_entropy(st, eq);
    const double w = total_energy(st).total;
    min_wrel = std::min(min_wrel, wrel);
    identity_gap = std::max(identity_gap, std::abs(wrel - (w - w_inf)) / (1.0 + std::abs(w)));
    const CsiszarKullback ck = csiszar_check(st, eq);
    ck_excess = std::max(ck_excess, ck.lhs - 4.0 * ck.w_rel * (1.0 + 1e-6) - h2);
    const PinskerBound pb = pinsker_check(st, eq);
    pinsker_excess = std::max(pinsker_excess, pb.lhs - pb.rhs * (1.0 + 1e-9) - 1e-14);
    if (st.u.max_abs() > 0.0) lady = std::max(lady, ladyzhenskaya_ratio(st.u));
    boundary = std::max(boundary, st.u.boundary_max_abs());
    const ScalarField div = div_from_faces(st.u);
    divergence = std::max(divergence, lp_norm(div, std::numeric_limits<double>::infinity()));
    const ScalarField rhs = st.v - st.w;
    const ScalarField r = dirichlet_laplacian(st.phi) - rhs;
    poisson = std::max(poisson, std::sqrt(inner(r, r)) / (1.0 + std::sqrt(inner(rhs, rhs))));
  };

  observe(s);
  double w_prev = total_energy(s).total;
  for (int k = 0; k < steps; ++k) {
    const double dt = std::min(cfg.dt, cfg.cfl_safety * sim.stable_dt(s));
    sim.step(s, dt);
    observe(s);
    const double w = total_energy(s).total;
    max_increment = std::max(max_increment, (w - w_prev) / (1.0 + std::abs(w_prev)));
    w_prev = w;
  }
  const double div_scale = 1.0 + initial.u.max_abs() / std::min(grid.hx(), grid.hy());

  std::vector<PropertyResult> r;
  auto add = [&](const std::string& name, double value, double bound) {
    r.push_back({name, value <= bound, value, bound});
  };
  add("densities_nonnegative", -min_density, 0.0);
  add("mass_conservation", mass_drift, 1e-12);
  add("energy_nonincreasing", steps > 0 ? max_increment : 0.0, 1e-12);
  add("production_nonnegative", -min_production, 1e-14);
  add("potential_consistent", poisson, std::max(cfg.tol_poisson, 1e-12));
  add("no_penetration", boundary, 0.0);
  add("velocity_divergence", divergence / div_scale, 1e-9);
  add("relative_entropy_nonnegative", -min_wrel, 1e-12);
  add("relative_entropy_identity", identity_gap, 1e-9);
  add("csiszar_kullback", ck_excess, 0.0);
  add("pinsker", pinsker_excess, 0.0);
  add("ladyzhenskaya", lady, 1.05);
  add("stationary_residual", eq.residual, cfg.tol_pb);
  add("sinh_form", sinh_form_check(eq), 1e-9);
  return r;
}

}  // namespace ehd
