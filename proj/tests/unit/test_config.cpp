#include <doctest.h>

#include <sstream>

#include "ehd/config.hpp"
#include "ehd/error.hpp"

using namespace ehd;

TEST_CASE("sectioned file parses") {
  std::istringstream in(R"(# comment
[grid]
nx = 32   ; trailing comment
lx = 2.5

[time]
t_max = 5
[initial]
preset = near-equilibrium
[masses]
M = 0.2
)");
  const SimConfig c = parse_config(in);
  CHECK(c.nx == 32);
  CHECK(c.ny == 64);
  CHECK(c.lx == 2.5);
  CHECK(c.t_max == 5.0);
  CHECK(c.preset == "near-equilibrium");
  CHECK(c.M == 0.2);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("unknown keys and bad values are errors") {
  std::istringstream unknown("[grid]\nnz = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), InvalidArgument);
  std::istringstream bad("[grid]\nnx = 3.5\n");
  CHECK_THROWS_AS(parse_config(bad), InvalidArgument);
  std::istringstream junk("[time]\ndt = fast\n");
  CHECK_THROWS_AS(parse_config(junk), InvalidArgument);
  std::istringstream no_eq("[time]\ndt\n");
  CHECK_THROWS_AS(parse_config(no_eq), InvalidArgument);
  std::istringstream header("[time\n");
  CHECK_THROWS_AS(parse_config(header), InvalidArgument);
}

TEST_CASE("dotted overrides") {
  SimConfig c;
  apply_override(c, "grid.nx=128");
  apply_override(c, " masses.N = 0.3 ");
  CHECK(c.nx == 128);
  CHECK(c.N == 0.3);
  CHECK_THROWS_AS(apply_override(c, "grid.nx"), InvalidArgument);
  CHECK_THROWS_AS(apply_override(c, "nx=3"), InvalidArgument);
}

TEST_CASE("top-level dotted keys are accepted in files") {
  std::istringstream in("time.dt = 0.5\n");
  CHECK(parse_config(in).dt == 0.5);
}

TEST_CASE("validation") {
  SimConfig c;
  c.M = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SimConfig{};
  c.cfl_safety = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SimConfig{};
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SimConfig{};
  c.record_every = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("serialization round-trips") {
  SimConfig c;
  c.nx = 40;
  c.lx = 1.0 / 3.0;
  c.preset = "vortex-charge";
  c.output_dir = "runs/a";
  std::istringstream in(to_string(c));
  const SimConfig back = parse_config(in);
  CHECK(back.nx == 40);
  CHECK(back.lx == c.lx);
  CHECK(back.preset == "vortex-charge");
  CHECK(back.output_dir == "runs/a");
  CHECK(config_keys().size() == 21);
}
