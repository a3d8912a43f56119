#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ehd {

/// Run configuration. File format: sectioned key = value, e.g.
///
///   [grid]
///   nx = 64
///   [time]
///   dt = 1e-2
///
/// Every key has a dotted name (grid.nx, time.dt, ...) that is also accepted
/// by apply_override. Unknown keys are errors.
struct SimConfig {
  // [grid]
  int nx = 64;
  int ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  // [time]
  double dt = 1e-2;
  double t_max = 1.0;
  double cfl_safety = 0.5;
  // [tolerances]
  double tol_poisson = 1e-10;
  double tol_pb = 1e-10;
  double tol_projection = 1e-10;
  // [initial]
  std::string preset = "relax-small-mass";
  double epsilon = 1e-3;    ///< near-equilibrium perturbation size
  double velocity = 0.05;   ///< vortex-charge peak stream-function velocity scale
  std::string v0_file;      ///< preset "file": cation density matrix
  std::string w0_file;      ///< preset "file": anion density matrix
  // [masses]
  double M = 0.05;
  double N = 0.1;
  double rho0_warn = 1.0;   ///< warn when M + N exceeds this
  // [output]
  std::string output_dir = "out";
  int record_every = 1;
  int snapshot_every = 0;   ///< 0: only the final state is written

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

/// All dotted keys understood by the parser, in file order.
const std::vector<std::string>& config_keys();

SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value" to cfg. Throws for unknown keys or bad values.
void apply_override(SimConfig& cfg, const std::string& assignment);
void set_config_value(SimConfig& cfg, const std::string& key, const std::string& value);

/// Serializes cfg in the file format (round-trips through parse_config).
std::string to_string(const SimConfig& cfg);

}  // namespace ehd
