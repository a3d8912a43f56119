#include "ehd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ehd/error.hpp"
#include "ehd/io.hpp"

namespace ehd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("config key " + key + ": not a number: '" + v + "'");
  }
  if (pos != v.size()) throw InvalidArgument("config key " + key + ": not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw InvalidArgument("config key " + key + ": not an integer: '" + v + "'");
  return x;
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const SimConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

template <typename T>
Field real(const char* key, T SimConfig::*m) {
  return {key, [m](SimConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); },
          [m](const SimConfig& c) { return format_real(c.*m); }};
}

Field integer(const char* key, int SimConfig::*m) {
  return {key, [m](SimConfig& c, const std::string& k, const std::string& v) { c.*m = to_int(k, v); },
          [m](const SimConfig& c) { return std::to_string(c.*m); }};
}

Field text(const char* key, std::string SimConfig::*m) {
  return {key, [m](SimConfig& c, const std::string&, const std::string& v) { c.*m = v; },
          [m](const SimConfig& c) { return c.*m; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      integer("grid.nx", &SimConfig::nx),
      integer("grid.ny", &SimConfig::ny),
      real("grid.lx", &SimConfig::lx),
      real("grid.ly", &SimConfig::ly),
      real("time.dt", &SimConfig::dt),
      real("time.t_max", &SimConfig::t_max),
      real("time.cfl_safety", &SimConfig::cfl_safety),
      real("tolerances.poisson", &SimConfig::tol_poisson),
      real("tolerances.pb", &SimConfig::tol_pb),
      real("tolerances.projection", &SimConfig::tol_projection),
      text("initial.preset", &SimConfig::preset),
      real("initial.epsilon", &SimConfig::epsilon),
      real("initial.velocity", &SimConfig::velocity),
      text("initial.v0", &SimConfig::v0_file),
      text("initial.w0", &SimConfig::w0_file),
      real("masses.M", &SimConfig::M),
      real("masses.N", &SimConfig::N),
      real("masses.rho0_warn", &SimConfig::rho0_warn),
      text("output.dir", &SimConfig::output_dir),
      integer("output.record_every", &SimConfig::record_every),
      integer("output.snapshot_every", &SimConfig::snapshot_every),
  };
  return f;
}

}  // namespace

void SimConfig::validate() const {
  if (nx < 3 || ny < 3) throw InvalidArgument("grid.nx and grid.ny must be >= 3");
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("grid.lx and grid.ly must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("time.dt must be positive");
  if (!(t_max >= 0.0)) throw InvalidArgument("time.t_max must be nonnegative");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidArgument("time.cfl_safety must lie in (0, 1]");
  if (!(tol_poisson > 0.0) || !(tol_pb > 0.0) || !(tol_projection > 0.0))
    throw InvalidArgument("tolerances must be positive");
  if (!(M > 0.0) || !(N > 0.0)) throw InvalidArgument("masses.M and masses.N must be positive");
  if (record_every < 1) throw InvalidArgument("output.record_every must be >= 1");
  if (snapshot_every < 0) throw InvalidArgument("output.snapshot_every must be >= 0");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_value(SimConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields())
    if (f.key == key) {
      f.set(cfg, key, value);
      return;
    }
  throw InvalidArgument("unknown config key '" + key + "'");
}

void apply_override(SimConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidArgument("override must look like key=value: '" + assignment + "'");
  set_config_value(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

SimConfig parse_config(std::istream& in) {
  SimConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidArgument("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    set_config_value(cfg, key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in);
}

std::string to_string(const SimConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = f.key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << f.key.substr(dot + 1) << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace ehd
