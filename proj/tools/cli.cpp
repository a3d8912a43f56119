#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <ostream>

#include "ehd/config.hpp"
#include "ehd/error.hpp"
#include "ehd/io.hpp"
#include "ehd/sim.hpp"
#include "ehd/stationary.hpp"

namespace ehd::cli {

namespace {

struct Invocation {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string preset;
  bool quiet = false;
  // check only
  std::string snapshot_dir;
  int snapshot_step = 0;
  int check_steps = 20;
};

SimConfig resolve_config(const Invocation& inv) {
  SimConfig cfg;
  if (!inv.config_path.empty()) {
    try {
      cfg = load_config(inv.config_path);
    } catch (const IoError& e) {
      throw InvalidArgument(e.what());
    }
  }
  for (const auto& o : inv.overrides) apply_override(cfg, o);
  if (!inv.preset.empty()) cfg.preset = inv.preset;
  if (!inv.out_dir.empty()) cfg.output_dir = inv.out_dir;
  cfg.validate();
  return cfg;
}

int cmd_run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const SimConfig cfg = resolve_config(inv);
  const RunResult r = run(cfg, RunOptions{true, inv.quiet ? nullptr : &err});
  if (!inv.quiet) {
    out << "steps " << r.steps << "\n";
    out << "t " << format_real(r.final_state.t) << "\n";
    if (!r.series.empty()) {
      out << "W " << format_real(r.series.back().W) << "\n";
      out << "W_rel " << format_real(r.series.back().W_rel) << "\n";
    }
    out << "output " << cfg.output_dir << "\n";
  }
  return kSuccess;
}

int cmd_stationary(const Invocation& inv, std::ostream& out) {
  const SimConfig cfg = resolve_config(inv);
  const Grid2D grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
  const StationarySolution s = solve_pb(cfg.M, cfg.N, grid, PbOptions{cfg.tol_pb, 50, 1e-13});
  write_stationary(cfg.output_dir, s);
  if (!inv.quiet) {
    out << "iterations " << s.iterations << "\n";
    out << "residual " << format_real(s.residual) << "\n";
    out << "phi_max_abs " << format_real(lp_norm(s.phi, INFINITY)) << "\n";
    out << "output " << cfg.output_dir << "\n";
  }
  return kSuccess;
}

int cmd_check(const Invocation& inv, std::ostream& out) {
  const SimConfig cfg = resolve_config(inv);
  const SystemState initial =
      inv.snapshot_dir.empty()
          ? make_initial_state(cfg)
          : read_snapshot(inv.snapshot_dir, inv.snapshot_step, Grid2D(cfg.nx, cfg.ny, cfg.lx, cfg.ly));
  const auto results = check_properties(cfg, initial, inv.check_steps);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass;
    out << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << format_real(r.value)
        << " <= " << format_real(r.bound) << "\n";
  }
  return ok ? kSuccess : kCheckFailure;
}

int cmd_presets(std::ostream& out) {
  for (const auto& p : presets()) out << p.name << "\t" << p.description << "\n";
  return kSuccess;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-dimensional electrohydrodynamics simulator", "ehd"};
  app.require_subcommand(1, 1);
  Invocation inv;

  auto common = [&inv](CLI::App* sub) {
    sub->add_option("--config", inv.config_path, "config file (sectioned key = value)");
    sub->add_option("--out", inv.out_dir, "output directory (overrides output.dir)");
    sub->add_option("--set", inv.overrides, "override KEY=VALUE, e.g. grid.nx=128 (repeatable)");
    sub->add_option("--preset", inv.preset, "initial-data preset (overrides initial.preset)");
    sub->add_flag("--quiet", inv.quiet, "suppress progress and summary output");
  };
  auto* run_cmd = app.add_subcommand("run", "run a full simulation");
  auto* stat_cmd = app.add_subcommand("stationary", "solve the stationary problem only");
  auto* check_cmd = app.add_subcommand("check", "run the invariant and inequality suite");
  auto* presets_cmd = app.add_subcommand("presets", "list initial-data presets");
  common(run_cmd);
  common(stat_cmd);
  common(check_cmd);
  check_cmd->add_option("--snapshot", inv.snapshot_dir, "directory holding <field>_<step>.txt files");
  check_cmd->add_option("--step", inv.snapshot_step, "snapshot step index");
  check_cmd->add_option("--steps", inv.check_steps, "time steps taken from the initial state")
      ->check(CLI::NonNegativeNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(inv, out, err);
    if (*stat_cmd) return cmd_stationary(inv, out);
    if (*check_cmd) return cmd_check(inv, out);
    if (*presets_cmd) return cmd_presets(out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kUsage;
}

}  // namespace ehd::cli
