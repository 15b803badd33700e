#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "iontopo/dynamics.hpp"
#include "iontopo/edges.hpp"
#include "iontopo/physical.hpp"
#include "iontopo/topology.hpp"

namespace iontopo {

// Fixed 12-significant-digit formatting used by every writer.
std::string format_number(double v);

void write_bands_csv(std::ostream& os, const Bands& b);
void write_flatness_csv(std::ostream& os, const std::vector<FlatnessMapEntry>& map);
void write_edge_csv(std::ostream& os, const std::vector<EdgeModeSet>& sets);
void write_profile_csv(std::ostream& os, const std::vector<ProfileEntry>& profile);
void write_density_csv(std::ostream& os, const DensityField& f, const Lattice& lat,
                       const std::vector<bool>& shell);
void write_lattice_json(std::ostream& os, const Lattice& lat);

std::string chern_json(const ChernResult& r);
std::string robustness_json(const RobustnessReport& r);
std::string params_json(const PhysicalParams& pp, const MappedParams& m);

}  // namespace iontopo
