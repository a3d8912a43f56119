#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ehd/config.hpp"
#include "ehd/diagnostics.hpp"
#include "ehd/fluid.hpp"
#include "ehd/poisson.hpp"
#include "ehd/state.hpp"
#include "ehd/stationary.hpp"
#include "ehd/transport.hpp"

namespace ehd {

/// Coupled time stepper. Keeps factorizations across steps, so reuse one
/// instance for a whole trajectory.
class Simulator {
 public:
  explicit Simulator(const Grid2D& grid, double tol_poisson = 1e-10, double tol_projection = 1e-10);

  const Grid2D& grid() const { return grid_; }

  /// phi with Lap_h phi = v - w (Dirichlet ghost convention).
  ScalarField potential(const ScalarField& v, const ScalarField& w) const;

  /// Largest admissible dt: min(h)/max(|u|, max|grad phi|), further capped by
  /// the positivity limit of the upwind advection.
  double stable_dt(const SystemState& s) const;

  /// One step of size dt, substeps in order:
  ///   phi <- Poisson(v - w); (v, w) <- charges; f <- body_force(v, w, phi);
  ///   (u, p) <- fluid; t <- t + dt; phi refreshed from the new densities.
  /// Throws CflViolation when dt > stable_dt(s).
  void step(SystemState& s, double dt);

 private:
  Grid2D grid_;
  PoissonSolver poisson_;
  ChargeStepper charges_;
  FluidStepper fluid_;
};

/// Convenience wrapper building a fresh Simulator.
SystemState step(const SystemState& s, double dt);

struct Preset {
  std::string name;
  std::string description;
  std::function<SystemState(const SimConfig&)> make;
};

/// symmetric-null, relax-small-mass, vortex-charge, near-equilibrium, file.
const std::vector<Preset>& presets();

/// Builds the initial state named by cfg.preset; phi is consistent with v - w.
/// Throws InvalidArgument for unknown names.
SystemState make_initial_state(const SimConfig& cfg);

struct RunOptions {
  bool write_files = true;
  std::ostream* log = nullptr;  ///< progress and warnings; null for silence
};

struct RunResult {
  std::vector<EnergyReport> series;
  std::vector<double> dt;  ///< every step size taken
  SystemState final_state;
  StationarySolution equilibrium;
  std::vector<std::filesystem::path> snapshots;
  int steps = 0;
};

/// Advances to cfg.t_max with dt = min(cfg.dt, cfl_safety * stable_dt).
/// Reports are taken at step 0 and every record_every steps (and at the end).
/// t_max = 0 gives an empty series and the initial state.
RunResult run(const SimConfig& cfg, const RunOptions& opts = {});
RunResult run(const SimConfig& cfg, SystemState initial, const RunOptions& opts = {});

/// Writes v, w, phi, p, ux, uy as snapshots/<field>_<step>.txt below dir.
std::vector<std::filesystem::path> write_snapshot(const std::filesystem::path& dir,
                                                  const SystemState& s, int step);

/// Reads a snapshot written by write_snapshot; phi is recomputed from v - w.
SystemState read_snapshot(const std::filesystem::path& dir, int step, const Grid2D& grid);

struct PropertyResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

/// Invariant and inequality suite on a state and a short trajectory from it.
std::vector<PropertyResult> check_properties(const SimConfig& cfg, const SystemState& initial,
                                             int steps = 20);

}  // namespace ehd
