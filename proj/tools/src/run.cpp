#include "iontopo/cli/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "iontopo/io.hpp"

#ifndef IONTOPO_VERSION
#define IONTOPO_VERSION "0.0.0"
#endif

namespace iontopo::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kManifestSchema = 1;

ordered_json num(double v) {
  if (std::isfinite(v)) return std::stod(format_number(v));
  return format_number(v);
}

ordered_json interval_json(const Interval& w) { return ordered_json::array({num(w.low), num(w.high)}); }

class Writer {
 public:
  explicit Writer(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_ + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << content;
    os.close();
    if (!os) throw IoError("write failed for " + path.string());
    files_.emplace_back(name, fnv1a(content));
  }

  template <class Fn>
  void write_stream(const std::string& name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    write(name, os.str());
  }

  const std::vector<std::pair<std::string, std::uint64_t>>& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::uint64_t>> files_;
};

Lattice make_lattice(const RunConfig& c) {
  return build_lattice(c.lattice.geometry, c.lattice.n1, c.lattice.n2, c.lattice.options);
}

EdgeOptions edge_options(const RunConfig& c) {
  EdgeOptions o;
  o.shell_width = c.numerics.shell_width;
  o.threshold = c.numerics.edge_threshold;
  o.margin = c.numerics.window_margin;
  o.grid_n = c.numerics.grid_n;
  o.grouping_tolerance = c.numerics.grouping_tolerance;
  return o;
}

std::vector<Interval> windows_for(const RunConfig& c, const ModelParams& p) {
  LatticeOptions torus = c.lattice.options;
  torus.plane_shape = PlaneShape::Parallelogram;
  return bulk_gap_windows(p, c.coupling(), torus, edge_options(c));
}

ordered_json model_json(const ModelParams& p) {
  return {{"beta_x", num(p.beta_x)}, {"v_b", num(p.v_b)}, {"gamma_y", num(p.gamma_y)}};
}

void run_bands(const RunConfig& c, Writer& w) {
  const ModelParams p = c.effective_model();
  const Lattice lat = make_lattice(c);
  BandOptions o;
  o.grid_n = c.numerics.grid_n;
  o.grouping_tolerance = c.numerics.grouping_tolerance;
  const Bands b = band_structure(BlochModel(lat, coulomb_coupling(lat, c.coupling())), p, o);
  if (c.output.csv) w.write_stream("bands.csv", [&](std::ostream& os) { write_bands_csv(os, b); });
  if (c.output.json) {
    ordered_json groups = ordered_json::array();
    for (std::size_t g = 0; g < b.groups.size(); ++g) {
      const FlatnessResult f = flatness(b, static_cast<int>(g));
      groups.push_back({{"bands", {b.groups[g].first, b.groups[g].last}},
                        {"bandwidth", num(f.bandwidth)},
                        {"gap_above", num(f.gap)},
                        {"flatness", num(f.flatness)}});
    }
    ordered_json gaps = ordered_json::array();
    for (const auto& g : band_gaps(b)) {
      gaps.push_back({{"below_group", g.below_group}, {"low", num(g.low)}, {"high", num(g.high)}, {"open", g.open()}});
    }
    w.write("bands.json", ordered_json{{"params", model_json(p)}, {"grid_n", b.grid_n}, {"groups", groups}, {"gaps", gaps}}
                              .dump(2) + "\n");
  }
}

void run_chern(const RunConfig& c, Writer& w) {
  std::vector<ModelParams> points;
  if (c.experiment.points.empty()) {
    points.push_back(c.effective_model());
  } else {
    const ModelParams base = c.effective_model();
    for (const auto& [beta, v] : c.experiment.points) {
      ModelParams p = base;
      p.beta_x = beta;
      p.v_b = v;
      points.push_back(p);
    }
  }
  ChernOptions o;
  o.grid_n = c.numerics.grid_n;
  o.max_grid_n = c.numerics.max_grid_n;
  o.auto_refine = c.numerics.auto_refine;
  o.residual_limit = c.numerics.residual_limit;
  o.grouping_tolerance = c.numerics.grouping_tolerance;
  const Lattice lat = make_lattice(c);
  const BlochModel model(lat, coulomb_coupling(lat, c.coupling()));
  ordered_json results = ordered_json::array();
  std::ostringstream csv;
  csv << "beta_x,v_b,group,chern,raw\n";
  for (const ModelParams& p : points) {
    const ChernResult r = band_chern_numbers(model, p, o);
    results.push_back(ordered_json::parse(chern_json(r)));
    for (std::size_t g = 0; g < r.per_group.size(); ++g) {
      csv << format_number(p.beta_x) << ',' << format_number(p.v_b) << ',' << g << ',' << r.per_group[g] << ','
          << format_number(r.per_group_raw[g]) << '\n';
    }
  }
  if (c.output.csv) w.write("chern.csv", csv.str());
  if (c.output.json) w.write("chern.json", results.dump(2) + "\n");
}

void run_cylinder(const RunConfig& c, Writer& w) {
  const ModelParams p = c.effective_model();
  const Lattice lat = make_lattice(c);
  const CylinderModel model(lat, coulomb_coupling(lat, c.coupling()));
  BandOptions o;
  o.cylinder_points = c.numerics.cylinder_points;
  o.grouping_tolerance = c.numerics.grouping_tolerance;
  o.keep_modes = true;
  const Bands b = band_structure(model, p, o);
  if (c.output.csv) w.write_stream("cylinder_bands.csv", [&](std::ostream& os) { write_bands_csv(os, b); });
  if (c.output.json) {
    ordered_json out = ordered_json::array();
    for (const Interval& win : windows_for(c, p)) {
      const EdgeVelocity ev = edge_crossings(b, lat, win, c.numerics.shell_width);
      ordered_json branches = ordered_json::array();
      for (const auto& br : ev.branches) {
        branches.push_back({{"band_index", br.band_index},
                            {"k", num(br.k)},
                            {"slope", num(br.slope)},
                            {"side", to_string(br.side)},
                            {"edge_weight", num(br.edge_weight)}});
      }
      out.push_back({{"window", interval_json(win)},
                     {"branches", branches},
                     {"chirality_bottom", ev.chirality_bottom},
                     {"chirality_top", ev.chirality_top},
                     {"counter_propagating", ev.counter_propagating()}});
    }
    w.write("cylinder.json", ordered_json{{"params", model_json(p)}, {"sites", lat.size()}, {"gaps", out}}.dump(2) + "\n");
  }
}

Spectrum plane_spectrum(const RunConfig& c, const Lattice& lat, const ModelParams& p) {
  return eigensolve(assemble_real_space(lat, p, coulomb_coupling(lat, c.coupling())));
}

void run_plane(const RunConfig& c, Writer& w) {
  const ModelParams p = c.effective_model();
  const Lattice lat = make_lattice(c);
  const Spectrum s = plane_spectrum(c, lat, p);
  const auto shell = spectrum_shell(lat, static_cast<int>(s.size()), c.numerics.shell_width);
  if (c.output.csv) {
    std::ostringstream os;
    os << "mode_index,energy,edge_weight\n";
    for (Eigen::Index l = 0; l < s.size(); ++l) {
      os << l << ',' << format_number(s.energies(l)) << ',' << format_number(edge_weight(s, static_cast<int>(l), shell))
         << '\n';
    }
    w.write("spectrum.csv", os.str());
  }
  if (c.output.json) w.write_stream("lattice.json", [&](std::ostream& os) { write_lattice_json(os, lat); });
}

void run_edges(const RunConfig& c, Writer& w) {
  const ModelParams p = c.effective_model();
  const Lattice lat = make_lattice(c);
  const Spectrum s = plane_spectrum(c, lat, p);
  const auto windows = windows_for(c, p);
  const auto sets = find_edge_modes(s, lat, windows, c.numerics.shell_width, c.numerics.edge_threshold);
  if (c.output.csv) {
    w.write_stream("edges.csv", [&](std::ostream& os) { write_edge_csv(os, sets); });
    for (std::size_t i = 0; i < c.experiment.profile_energies.size(); ++i) {
      Eigen::Index mode = 0;
      (s.energies.array() - c.experiment.profile_energies[i]).abs().minCoeff(&mode);
      const auto profile = localization_profile(s, lat, static_cast<int>(mode));
      w.write_stream("profile_" + std::to_string(i) + ".csv", [&](std::ostream& os) { write_profile_csv(os, profile); });
    }
  }
  if (c.output.json) {
    ordered_json out = ordered_json::array();
    for (const auto& set : sets) {
      out.push_back({{"window_id", set.window_id},
                     {"window", interval_json(set.window)},
                     {"in_gap_count", set.in_gap_count},
                     {"edge_count", set.modes.size()}});
    }
    w.write("edges.json", ordered_json{{"params", model_json(p)}, {"sites", lat.size()}, {"windows", out}}.dump(2) + "\n");
  }
}

void run_disorder(const RunConfig& c, Writer& w) {
  const ModelParams p = c.effective_model();
  const Lattice lat = make_lattice(c);
  DisorderSpec spec = c.experiment.disorder.spec;
  spec.seed = c.seed;
  const RobustnessReport r =
      disorder_robustness(lat, p, coulomb_coupling(lat, c.coupling()), spec, c.experiment.disorder.trials,
                          windows_for(c, p), c.numerics.shell_width, c.numerics.edge_threshold);
  if (c.output.json) w.write("robustness.json", robustness_json(r) + "\n");
  if (c.output.csv) {
    std::ostringstream os;
    os << "seed,in_gap_count,edge_count,max_edge_weight\n";
    for (const auto& t : r.per_trial) {
      os << t.seed << ',' << t.in_gap_count << ',' << t.edge_count << ',' << format_number(t.max_edge_weight) << '\n';
    }
    w.write("robustness.csv", os.str());
  }
}

void run_drive(const RunConfig& c, Writer& w) {
  const ModelParams p = c.effective_model();
  const Lattice lat = make_lattice(c);
  const Spectrum s = plane_spectrum(c, lat, p);
  const auto shell = spectrum_shell(lat, static_cast<int>(s.size()), c.numerics.shell_width);
  ordered_json table = ordered_json::array();
  for (double omega : c.experiment.drive.omega_d) {
    DriveSpec d;
    d.omega_d = omega;
    d.t_f = c.experiment.drive.t_f;
    d.amplitude = c.experiment.drive.amplitude;
    d.profile = c.experiment.drive.profile;
    const DensityField raw = drive_response(s, d);
    const DensityField f = normalized_density(raw, shell);
    if (c.output.csv) {
      w.write_stream("density_" + format_number(omega) + ".csv",
                     [&](std::ostream& os) { write_density_csv(os, f, lat, shell); });
    }
    ordered_json row{{"omega_d", num(omega)}, {"boundary_fraction", num(f.boundary_fraction)}, {"total", num(f.total())}};
    if (c.numerics.ode_dt > 0.0) {
      row["ode_relative_difference"] = num(relative_difference(drive_response_ode(s, d, c.numerics.ode_dt), raw));
    }
    table.push_back(row);
  }
  if (c.output.json) {
    w.write("sweep.json", ordered_json{{"params", model_json(p)},
                                       {"t_f", num(c.experiment.drive.t_f)},
                                       {"sites", lat.size()},
                                       {"drive", table}}
                              .dump(2) + "\n");
  }
}

void run_flatness(const RunConfig& c, Writer& w) {
  FlatnessMapSpec spec;
  spec.v_b_range = c.experiment.sweep.v_b_range;
  spec.beta_range = c.experiment.sweep.beta_range;
  spec.v_b_points = c.experiment.sweep.v_b_points;
  spec.beta_points = c.experiment.sweep.beta_points;
  spec.grid_n = c.numerics.grid_n;
  spec.grouping_tolerance = c.numerics.grouping_tolerance;
  spec.coupling = c.coupling();
  spec.lattice = c.lattice.options;
  if (c.model || c.physical) spec.gamma_y = c.effective_model().gamma_y;
  const auto map = flatness_map(spec);
  if (c.output.csv) w.write_stream("flatness.csv", [&](std::ostream& os) { write_flatness_csv(os, map); });
  if (c.output.json) {
    ordered_json best = nullptr;
    if (const auto m = max_flatness(map)) {
      best = {{"v_b", num(m->v_b)}, {"beta_x", num(m->beta_x)}, {"flatness", num(m->result.flatness)}};
    }
    w.write("flatness.json", ordered_json{{"points", map.size()}, {"max", best}}.dump(2) + "\n");
  }
}

void run_params(const RunConfig& c, Writer& w) {
  const PhysicalParams pp = c.physical->to_params();
  w.write("params.json", params_json(pp, map_physical_params(pp)) + "\n");
}

}  // namespace

RunReport run(const RunConfig& config, const std::string& directory) {
  const auto start = std::chrono::steady_clock::now();
  Writer w(directory);
  switch (config.command) {
    case Command::Bands:
      run_bands(config, w);
      break;
    case Command::Chern:
      run_chern(config, w);
      break;
    case Command::Cylinder:
      run_cylinder(config, w);
      break;
    case Command::Plane:
      run_plane(config, w);
      break;
    case Command::Edges:
      run_edges(config, w);
      break;
    case Command::Disorder:
      run_disorder(config, w);
      break;
    case Command::Drive:
      run_drive(config, w);
      break;
    case Command::FlatnessMap:
      run_flatness(config, w);
      break;
    case Command::Params:
      run_params(config, w);
      break;
  }

  RunReport report;
  report.directory = directory;
  report.config_hash = hex_digest(config_hash(config));
  std::uint64_t digest = fnv1a("");
  ordered_json outputs = ordered_json::array();
  for (const auto& [name, h] : w.files()) {
    report.files.push_back(name);
    digest = fnv1a(name + ":" + hex_digest(h) + "\n", digest);
    outputs.push_back({{"file", name}, {"fnv1a", hex_digest(h)}});
  }
  report.outputs_digest = hex_digest(digest);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ordered_json manifest;
  manifest["schema_version"] = kManifestSchema;
  manifest["tool"] = "iontopo";
  manifest["version"] = IONTOPO_VERSION;
  manifest["libraries"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                            "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  manifest["command"] = to_string(config.command);
  manifest["seed"] = config.seed;
  manifest["threads"] = thread_count();
  manifest["config_hash"] = report.config_hash;
  manifest["config"] = ordered_json::parse(effective_config(config));
  manifest["outputs"] = outputs;
  manifest["outputs_digest"] = report.outputs_digest;
  manifest["wall_time_s"] = report.wall_time_s;
  const auto path = std::filesystem::path(directory) / "manifest.json";
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << manifest.dump(2) << '\n';
  if (!os) throw IoError("write failed for " + path.string());
  return report;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return 2;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

}  // namespace iontopo::cli
