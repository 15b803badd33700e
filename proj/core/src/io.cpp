#include "iontopo/io.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace iontopo {

namespace {

using nlohmann::ordered_json;

// JSON has no inf/nan; those become strings.
ordered_json number(double v) {
  if (std::isfinite(v)) return std::stod(format_number(v));
  return format_number(v);
}

ordered_json params_object(const ModelParams& p) {
  return ordered_json{{"beta_x", number(p.beta_x)}, {"v_b", number(p.v_b)}, {"gamma_y", number(p.gamma_y)}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_bands_csv(std::ostream& os, const Bands& b) {
  const bool torus = b.geometry == Geometry::Torus;
  os << (torus ? "k1,k2,band_index,energy\n" : "kx,band_index,energy\n");
  for (int i = 0; i < b.num_k(); ++i) {
    const Vec2& k = b.k_points[static_cast<std::size_t>(i)];
    for (int s = 0; s < b.num_bands(); ++s) {
      os << format_number(k.x()) << ',';
      if (torus) os << format_number(k.y()) << ',';
      os << s << ',' << format_number(b.energies(i, s)) << '\n';
    }
  }
}

void write_flatness_csv(std::ostream& os, const std::vector<FlatnessMapEntry>& map) {
  os << "v_b,beta_x,bandwidth,gap,flatness\n";
  for (const auto& e : map) {
    os << format_number(e.v_b) << ',' << format_number(e.beta_x) << ',' << format_number(e.result.bandwidth)
       << ',' << format_number(e.result.gap) << ',' << format_number(e.result.flatness) << '\n';
  }
}

void write_edge_csv(std::ostream& os, const std::vector<EdgeModeSet>& sets) {
  os << "window_id,energy,edge_weight,side\n";
  for (const auto& set : sets) {
    for (const auto& m : set.modes) {
      os << set.window_id << ',' << format_number(m.energy) << ',' << format_number(m.edge_weight) << ','
         << to_string(m.side) << '\n';
    }
  }
}

void write_profile_csv(std::ostream& os, const std::vector<ProfileEntry>& profile) {
  os << "site_index,x,y,dens_x,dens_y\n";
  for (const auto& p : profile) {
    os << p.site_index << ',' << format_number(p.position.x()) << ',' << format_number(p.position.y()) << ','
       << format_number(p.dens_x) << ',' << format_number(p.dens_y) << '\n';
  }
}

void write_density_csv(std::ostream& os, const DensityField& f, const Lattice& lat,
                       const std::vector<bool>& shell) {
  os << "site_index,x,y,rho,rho_bar,is_boundary\n";
  for (std::size_t j = 0; j < f.rho.size(); ++j) {
    const Site& s = lat.site(static_cast<int>(j));
    const double bar = j < f.rho_bar.size() ? f.rho_bar[j] : 0.0;
    os << j << ',' << format_number(s.position.x()) << ',' << format_number(s.position.y()) << ','
       << format_number(f.rho[j]) << ',' << format_number(bar) << ',' << (shell[j] ? 1 : 0) << '\n';
  }
}

void write_lattice_json(std::ostream& os, const Lattice& lat) {
  ordered_json sites = ordered_json::array();
  for (const auto& s : lat.sites()) {
    sites.push_back({{"index", s.index},
                     {"position", {number(s.position.x()), number(s.position.y())}},
                     {"sublattice", s.sublattice == Sublattice::A ? "A" : "B"},
                     {"is_boundary", s.is_boundary}});
  }
  os << ordered_json{{"sites", sites}}.dump(2) << '\n';
}

std::string chern_json(const ChernResult& r) {
  ordered_json j;
  j["params"] = params_object(r.params);
  j["grid_n"] = r.grid_n;
  ordered_json raw = ordered_json::array();
  for (double v : r.cumulative_raw) raw.push_back(number(v));
  j["cumulative_raw"] = raw;
  j["per_group"] = r.per_group;
  ordered_json res = ordered_json::array();
  for (double v : r.residuals) res.push_back(number(v));
  j["residuals"] = res;
  j["method_agreement"] = r.method_agreement;
  ordered_json groups = ordered_json::array();
  for (std::size_t g = 0; g < r.groups.size(); ++g) {
    groups.push_back({{"bands", {r.groups[g].first, r.groups[g].last}}, {"merged", static_cast<bool>(r.merged[g])}});
  }
  j["groups"] = groups;
  ordered_json gaps = ordered_json::array();
  for (std::size_t g = 0; g < r.gaps.size(); ++g) {
    gaps.push_back({{"low", number(r.gaps[g].low)},
                    {"high", number(r.gaps[g].high)},
                    {"open", static_cast<bool>(r.gap_open[g])}});
  }
  j["gaps"] = gaps;
  return j.dump(2);
}

std::string robustness_json(const RobustnessReport& r) {
  ordered_json trials = ordered_json::array();
  for (const auto& t : r.per_trial) {
    trials.push_back({{"seed", t.seed},
                      {"in_gap_count", t.in_gap_count},
                      {"edge_count", t.edge_count},
                      {"max_edge_weight", number(t.max_edge_weight)},
                      {"edge_count_per_window", t.edge_count_per_window}});
  }
  ordered_json j{{"trials", r.trials},
                 {"persistence_rate", number(r.persistence_rate)},
                 {"all_windows_rate", number(r.all_windows_rate)},
                 {"per_trial", trials}};
  return j.dump(2);
}

std::string params_json(const PhysicalParams& pp, const MappedParams& m) {
  const DerivedParams& d = m.derived;
  ordered_json j;
  j["physical"] = {{"mass", number(pp.mass)},           {"omega_x", number(pp.omega_x)},
                   {"omega_y", number(pp.omega_y)},     {"rabi_x", number(pp.rabi_x)},
                   {"rabi_y", number(pp.rabi_y)},       {"wavevector", number(pp.wavevector)},
                   {"spacing", number(pp.spacing)}};
  j["derived"] = {{"lambda_x", number(d.lambda_x)},
                  {"lambda_y", number(d.lambda_y)},
                  {"omega_tilde_x", number(d.omega_tilde_x)},
                  {"omega_tilde_y", number(d.omega_tilde_y)},
                  {"coupling", number(d.coupling)},
                  {"eta_x", number(d.eta_x)},
                  {"eta_y", number(d.eta_y)},
                  {"adiabatic_ratio", number(d.validity.adiabatic_ratio)},
                  {"adiabatic", d.validity.adiabatic},
                  {"stiff", d.validity.stiff},
                  {"lamb_dicke", d.validity.lamb_dicke}};
  j["model"] = params_object(m.model);
  return j.dump(2);
}

}  // namespace iontopo
