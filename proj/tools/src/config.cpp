#include "iontopo/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

namespace iontopo::cli {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * kPi;

struct CommandName {
  Command command;
  const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::Bands, "bands"},       {Command::Chern, "chern"},       {Command::Cylinder, "cylinder"},
    {Command::Plane, "plane"},       {Command::Edges, "edges"},       {Command::Disorder, "disorder"},
    {Command::Drive, "drive"},       {Command::FlatnessMap, "flatness-map"}, {Command::Params, "params"},
};

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Object view that rejects keys outside the allowed set.
class Block {
 public:
  Block(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.count(key)) fail(join_path(path_, key), "unknown key");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const { return j_.at(key); }
  std::string path(const std::string& key) const { return join_path(path_, key); }

  void get(const std::string& key, double& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(path(key), "expected a finite number");
  }
  void get(const std::string& key, int& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    out = v.get<int>();
  }
  void get(const std::string& key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) fail(path(key), "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  void get(const std::string& key, bool& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(path(key), "expected true or false");
    out = v.get<bool>();
  }
  void get(const std::string& key, std::string& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    out = v.get<std::string>();
  }
  void get(const std::string& key, Interval& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(path(key), "expected [low, high]");
    }
    out = {v[0].get<double>(), v[1].get<double>()};
  }
  void get(const std::string& key, std::vector<double>& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (v.is_number()) {
      out = {v.get<double>()};
      return;
    }
    if (!v.is_array()) fail(path(key), "expected a number or an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(path(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
  }

 private:
  const json& j_;
  std::string path_;
};

template <class E, std::size_t N>
E lookup(const std::string& path, const std::string& name, const std::pair<const char*, E> (&table)[N]) {
  for (const auto& [n, e] : table) {
    if (name == n) return e;
  }
  std::string options;
  for (const auto& [n, e] : table) options += std::string(options.empty() ? "" : ", ") + n;
  fail(path, "unknown value '" + name + "' (expected one of " + options + ")");
}

template <class E, std::size_t N>
const char* name_of(E value, const std::pair<const char*, E> (&table)[N]) {
  for (const auto& [n, e] : table) {
    if (e == value) return n;
  }
  return "?";
}

constexpr std::pair<const char*, Geometry> kGeometries[] = {
    {"torus", Geometry::Torus}, {"cylinder", Geometry::Cylinder}, {"plane", Geometry::Plane}};
constexpr std::pair<const char*, Orientation> kOrientations[] = {
    {"zigzag_x", Orientation::ZigzagX}, {"armchair_x", Orientation::ArmchairX}};
constexpr std::pair<const char*, PlaneShape> kShapes[] = {
    {"parallelogram", PlaneShape::Parallelogram}, {"hexagon", PlaneShape::Hexagon}};
constexpr std::pair<const char*, DisorderMode> kModes[] = {{"draw", DisorderMode::Draw}, {"add", DisorderMode::Add}};

LatticeBlock default_lattice(Command c) {
  LatticeBlock b;
  switch (c) {
    case Command::Cylinder:
      b.geometry = Geometry::Cylinder;
      b.n1 = 10;
      b.n2 = 20;
      break;
    case Command::Plane:
    case Command::Edges:
    case Command::Disorder:
    case Command::Drive:
      b.geometry = Geometry::Plane;
      b.n1 = b.n2 = 8;
      b.options.plane_shape = PlaneShape::Hexagon;
      break;
    default:
      break;
  }
  return b;
}

Geometry required_geometry(Command c) {
  switch (c) {
    case Command::Cylinder:
      return Geometry::Cylinder;
    case Command::Plane:
    case Command::Edges:
    case Command::Disorder:
    case Command::Drive:
      return Geometry::Plane;
    default:
      return Geometry::Torus;
  }
}

void parse_lattice(const json& j, RunConfig& c) {
  const Block b(j, "lattice", {"geometry", "n1", "n2", "orientation", "shape", "bond_length"});
  std::string s;
  if (b.has("geometry")) {
    b.get("geometry", s);
    c.lattice.geometry = lookup(b.path("geometry"), s, kGeometries);
  }
  b.get("n1", c.lattice.n1);
  b.get("n2", c.lattice.n2);
  if (b.has("orientation")) {
    b.get("orientation", s);
    c.lattice.options.orientation = lookup(b.path("orientation"), s, kOrientations);
  }
  if (b.has("shape")) {
    b.get("shape", s);
    c.lattice.options.plane_shape = lookup(b.path("shape"), s, kShapes);
  }
  b.get("bond_length", c.lattice.options.bond_length);
}

void parse_model(const json& j, RunConfig& c) {
  const Block b(j, "model", {"beta_x", "v_b", "gamma_y"});
  ModelParams p;
  b.get("beta_x", p.beta_x);
  b.get("v_b", p.v_b);
  b.get("gamma_y", p.gamma_y);
  c.model = p;
}

void parse_physical(const json& j, RunConfig& c) {
  const Block b(j, "physical",
                {"mass_amu", "omega_x_hz", "omega_y_hz", "rabi_x_hz", "rabi_y_hz", "wavevector", "eta", "spacing_um",
                 "charge_e"});
  if (b.has("wavevector") && b.has("eta")) {
    fail("physical", "give either physical.wavevector or physical.eta, not both");
  }
  PhysicalBlock pb;
  double eta = 0.0;
  b.get("mass_amu", pb.mass_amu);
  b.get("omega_x_hz", pb.omega_x_hz);
  b.get("omega_y_hz", pb.omega_y_hz);
  b.get("rabi_x_hz", pb.rabi_x_hz);
  b.get("rabi_y_hz", pb.rabi_y_hz);
  b.get("wavevector", pb.wavevector);
  b.get("eta", eta);
  b.get("spacing_um", pb.spacing_um);
  b.get("charge_e", pb.charge_e);
  if (b.has("eta")) {
    if (!(eta >= 0.0)) fail(b.path("eta"), "must be >= 0");
    const PhysicalParams pp = pb.to_params();
    pb.wavevector = eta / std::sqrt(constants::kHbar / (2.0 * pp.mass * pp.omega_x));
  }
  try {
    pb.to_params().validate();
  } catch (const std::invalid_argument& e) {
    fail("physical", e.what());
  }
  c.physical = pb;
}

void parse_numerics(const json& j, RunConfig& c) {
  const Block b(j, "numerics",
                {"grid_n", "max_grid_n", "auto_refine", "cylinder_points", "cutoff_radius", "nn_only",
                 "include_onsite_coulomb", "grouping_tolerance", "residual_limit", "shell_width", "edge_threshold",
                 "window_margin", "ode_dt"});
  NumericsBlock& n = c.numerics;
  b.get("grid_n", n.grid_n);
  b.get("max_grid_n", n.max_grid_n);
  b.get("auto_refine", n.auto_refine);
  b.get("cylinder_points", n.cylinder_points);
  b.get("cutoff_radius", n.cutoff_radius);
  b.get("nn_only", n.nn_only);
  b.get("include_onsite_coulomb", n.include_onsite_coulomb);
  b.get("grouping_tolerance", n.grouping_tolerance);
  b.get("residual_limit", n.residual_limit);
  b.get("shell_width", n.shell_width);
  b.get("edge_threshold", n.edge_threshold);
  b.get("window_margin", n.window_margin);
  b.get("ode_dt", n.ode_dt);
  if (n.grid_n < 2) fail(b.path("grid_n"), "must be >= 2");
  if (n.max_grid_n < n.grid_n) fail(b.path("max_grid_n"), "must be >= grid_n");
  if (n.cylinder_points < 2) fail(b.path("cylinder_points"), "must be >= 2");
  if (n.cutoff_radius < 1.0) fail(b.path("cutoff_radius"), "must be >= 1");
  if (!(n.grouping_tolerance > 0.0)) fail(b.path("grouping_tolerance"), "must be positive");
  if (!(n.residual_limit > 0.0)) fail(b.path("residual_limit"), "must be positive");
  if (n.shell_width < 1) fail(b.path("shell_width"), "must be >= 1");
  if (!(n.edge_threshold > 0.0 && n.edge_threshold <= 1.0)) fail(b.path("edge_threshold"), "must lie in (0, 1]");
  if (!(n.window_margin >= 0.0 && n.window_margin < 0.5)) fail(b.path("window_margin"), "must lie in [0, 0.5)");
  if (!(n.ode_dt >= 0.0)) fail(b.path("ode_dt"), "must be >= 0");
}

void parse_experiment(const json& j, RunConfig& c) {
  const Block b(j, "experiment", {"disorder", "drive", "sweep", "points", "profile_energies"});
  ExperimentBlock& e = c.experiment;
  if (b.has("disorder")) {
    const Block d(b.raw("disorder"), "experiment.disorder", {"v_b_interval", "omega_interval", "mode", "trials"});
    d.get("v_b_interval", e.disorder.spec.v_b_interval);
    d.get("omega_interval", e.disorder.spec.omega_interval);
    if (d.has("mode")) {
      std::string s;
      d.get("mode", s);
      e.disorder.spec.mode = lookup(d.path("mode"), s, kModes);
    }
    d.get("trials", e.disorder.trials);
    if (e.disorder.trials < 1) fail(d.path("trials"), "must be >= 1");
    try {
      e.disorder.spec.validate();
    } catch (const std::invalid_argument& ex) {
      fail("experiment.disorder", ex.what());
    }
  }
  if (b.has("drive")) {
    const Block d(b.raw("drive"), "experiment.drive", {"omega_d", "t_f", "amplitude", "profile"});
    d.get("omega_d", e.drive.omega_d);
    d.get("t_f", e.drive.t_f);
    d.get("amplitude", e.drive.amplitude);
    d.get("profile", e.drive.profile);
    if (e.drive.omega_d.empty()) fail(d.path("omega_d"), "needs at least one frequency");
    for (double w : e.drive.omega_d) {
      if (!(w > 0.0)) fail(d.path("omega_d"), "frequencies must be positive");
    }
    if (!(e.drive.t_f >= 0.0)) fail(d.path("t_f"), "must be >= 0");
  }
  if (b.has("sweep")) {
    const Block s(b.raw("sweep"), "experiment.sweep", {"v_b_range", "beta_range", "v_b_points", "beta_points"});
    s.get("v_b_range", e.sweep.v_b_range);
    s.get("beta_range", e.sweep.beta_range);
    s.get("v_b_points", e.sweep.v_b_points);
    s.get("beta_points", e.sweep.beta_points);
    if (e.sweep.v_b_points < 1) fail(s.path("v_b_points"), "must be >= 1");
    if (e.sweep.beta_points < 1) fail(s.path("beta_points"), "must be >= 1");
  }
  if (b.has("points")) {
    const json& pts = b.raw("points");
    if (!pts.is_array()) fail(b.path("points"), "expected an array of [beta_x, v_b] pairs");
    e.points.clear();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const json& p = pts[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        fail(b.path("points") + "[" + std::to_string(i) + "]", "expected [beta_x, v_b]");
      }
      e.points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  b.get("profile_energies", e.profile_energies);
}

void parse_output(const json& j, RunConfig& c) {
  const Block b(j, "output", {"directory", "formats"});
  b.get("directory", c.output.directory);
  if (b.has("formats")) {
    const json& f = b.raw("formats");
    if (!f.is_array()) fail(b.path("formats"), "expected an array of \"csv\" / \"json\"");
    c.output.csv = c.output.json = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string p = b.path("formats") + "[" + std::to_string(i) + "]";
      if (!f[i].is_string()) fail(p, "expected a string");
      const auto s = f[i].get<std::string>();
      if (s == "csv") {
        c.output.csv = true;
      } else if (s == "json") {
        c.output.json = true;
      } else {
        fail(p, "unknown format '" + s + "'");
      }
    }
  }
}

json interval(const Interval& i) { return json::array({i.low, i.high}); }

}  // namespace

const char* to_string(Command c) {
  for (const auto& e : kCommands) {
    if (e.command == c) return e.name;
  }
  return "?";
}

PhysicalParams PhysicalBlock::to_params() const {
  PhysicalParams pp;
  pp.mass = mass_amu * constants::kAtomicMass;
  pp.omega_x = kTwoPi * omega_x_hz;
  pp.omega_y = kTwoPi * omega_y_hz;
  pp.rabi_x = kTwoPi * rabi_x_hz;
  pp.rabi_y = kTwoPi * rabi_y_hz;
  pp.wavevector = wavevector;
  pp.spacing = spacing_um * 1e-6;
  pp.charge = charge_e * constants::kElementaryCharge;
  return pp;
}

ModelParams RunConfig::effective_model() const {
  if (physical) return map_physical_params(physical->to_params()).model;
  return model.value_or(ModelParams{});
}

CouplingOptions RunConfig::coupling() const {
  CouplingOptions o;
  o.cutoff_radius = numerics.cutoff_radius;
  o.nn_only = numerics.nn_only;
  o.include_onsite_coulomb = numerics.include_onsite_coulomb;
  return o;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: malformed JSON: ") + e.what());
  }
  const Block b(root, "", {"command", "seed", "lattice", "model", "physical", "numerics", "experiment", "output"});
  if (!b.has("command")) fail("command", "missing");
  RunConfig c;
  std::string name;
  b.get("command", name);
  bool found = false;
  for (const auto& e : kCommands) {
    if (name == e.name) {
      c.command = e.command;
      found = true;
    }
  }
  if (!found) fail("command", "unknown command '" + name + "'");
  b.get("seed", c.seed);
  c.experiment.disorder.spec.seed = c.seed;

  if (b.has("model") && b.has("physical")) {
    std::string keys;
    for (const char* block : {"model", "physical"}) {
      for (const auto& [k, v] : root.at(block).items()) keys += std::string(keys.empty() ? "" : ", ") + block + "." + k;
    }
    throw ConfigError("model, physical: conflicting parameter blocks (" + keys + "); give exactly one");
  }
  if (b.has("model")) parse_model(root.at("model"), c);
  if (b.has("physical")) parse_physical(root.at("physical"), c);
  if (!c.model && !c.physical) {
    if (c.command == Command::Params) fail("physical", "missing (required by params)");
    if (c.command != Command::FlatnessMap) fail("model", "missing (give a model or a physical block)");
  }
  if (c.command == Command::Params && !c.physical) fail("physical", "missing (required by params)");

  c.lattice = default_lattice(c.command);
  if (b.has("lattice")) parse_lattice(root.at("lattice"), c);
  const Geometry need = required_geometry(c.command);
  if (c.lattice.geometry != need) {
    fail("lattice.geometry", std::string("command ") + to_string(c.command) + " needs " + name_of(need, kGeometries));
  }
  if (c.lattice.n1 < 1 || c.lattice.n2 < 1) fail("lattice", "n1 and n2 must be >= 1");
  if (!(c.lattice.options.bond_length > 0.0)) fail("lattice.bond_length", "must be positive");

  if (b.has("numerics")) parse_numerics(root.at("numerics"), c);
  if (b.has("experiment")) parse_experiment(root.at("experiment"), c);
  if (b.has("output")) parse_output(root.at("output"), c);

  if (c.model) {
    try {
      c.model->validate();
    } catch (const std::invalid_argument& e) {
      fail("model", e.what());
    }
  }
  if (c.physical) {
    try {
      map_physical_params(c.physical->to_params());
    } catch (const std::invalid_argument& e) {
      fail("physical", e.what());
    }
  }
  if (c.command == Command::Drive && !c.experiment.drive.profile.empty()) {
    const Lattice lat = build_lattice(c.lattice.geometry, c.lattice.n1, c.lattice.n2, c.lattice.options);
    if (static_cast<int>(c.experiment.drive.profile.size()) != lat.size()) {
      fail("experiment.drive.profile", "needs one amplitude per site (" + std::to_string(lat.size()) + ")");
    }
  }
  return c;
}

std::string effective_config(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["seed"] = c.seed;
  j["lattice"] = {{"geometry", name_of(c.lattice.geometry, kGeometries)},
                  {"n1", c.lattice.n1},
                  {"n2", c.lattice.n2},
                  {"orientation", name_of(c.lattice.options.orientation, kOrientations)},
                  {"shape", name_of(c.lattice.options.plane_shape, kShapes)},
                  {"bond_length", c.lattice.options.bond_length}};
  if (c.model) j["model"] = {{"beta_x", c.model->beta_x}, {"v_b", c.model->v_b}, {"gamma_y", c.model->gamma_y}};
  if (c.physical) {
    const PhysicalBlock& p = *c.physical;
    j["physical"] = {{"mass_amu", p.mass_amu},     {"omega_x_hz", p.omega_x_hz}, {"omega_y_hz", p.omega_y_hz},
                     {"rabi_x_hz", p.rabi_x_hz},   {"rabi_y_hz", p.rabi_y_hz},   {"wavevector", p.wavevector},
                     {"spacing_um", p.spacing_um}, {"charge_e", p.charge_e}};
  }
  const NumericsBlock& n = c.numerics;
  j["numerics"] = {{"grid_n", n.grid_n},
                   {"max_grid_n", n.max_grid_n},
                   {"auto_refine", n.auto_refine},
                   {"cylinder_points", n.cylinder_points},
                   {"cutoff_radius", n.cutoff_radius},
                   {"nn_only", n.nn_only},
                   {"include_onsite_coulomb", n.include_onsite_coulomb},
                   {"grouping_tolerance", n.grouping_tolerance},
                   {"residual_limit", n.residual_limit},
                   {"shell_width", n.shell_width},
                   {"edge_threshold", n.edge_threshold},
                   {"window_margin", n.window_margin},
                   {"ode_dt", n.ode_dt}};
  const ExperimentBlock& e = c.experiment;
  json points = json::array();
  for (const auto& [beta, v] : e.points) points.push_back({beta, v});
  j["experiment"] = {
      {"disorder",
       {{"v_b_interval", interval(e.disorder.spec.v_b_interval)},
        {"omega_interval", interval(e.disorder.spec.omega_interval)},
        {"mode", name_of(e.disorder.spec.mode, kModes)},
        {"trials", e.disorder.trials}}},
      {"drive",
       {{"omega_d", e.drive.omega_d}, {"t_f", e.drive.t_f}, {"amplitude", e.drive.amplitude}, {"profile", e.drive.profile}}},
      {"sweep",
       {{"v_b_range", interval(e.sweep.v_b_range)},
        {"beta_range", interval(e.sweep.beta_range)},
        {"v_b_points", e.sweep.v_b_points},
        {"beta_points", e.sweep.beta_points}}},
      {"points", points},
      {"profile_energies", e.profile_energies}};
  json formats = json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  j["output"] = {{"directory", c.output.directory}, {"formats", formats}};
  return j.dump(2);
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const RunConfig& c) { return fnv1a(effective_config(c)); }

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace iontopo::cli
