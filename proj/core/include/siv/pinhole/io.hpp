#pragma once

#include <iosfwd>
#include <string_view>

#include "siv/config.hpp"
#include "siv/pinhole/simulate.hpp"

namespace siv::pinhole {

/// Keys: diameter_um, foil_thickness_um, wall_angle_deg, tilt_horizontal_deg,
/// tilt_vertical_deg, material (see stopping::material_from_json). Missing
/// keys keep their defaults.
PinholeGeometry geometry_from_json(const config::Json& j);

/// Keys: ion, energy_mev, divergence_mrad, lateral_radius_um, fluence_cm2.
BeamSpec beam_from_json(const config::Json& j);

/// `radius_um,relative_density` rows at bin centres.
void write_radial_profile_csv(std::ostream& os, const RadialProfile& profile);

/// `x_um,y_um,counts` for every non-empty direct-histogram bin.
void write_direct_histogram_csv(std::ostream& os, const SamplePlaneTally& tally);

/// Persists a tally (counters, binning, direct histogram and scattered
/// impacts) in a text format read back by load_tally. Entries of `extra`
/// are stored in the header line.
void save_tally(std::ostream& os, const SamplePlaneTally& tally, const config::Json& extra = {});
/// Header line of a tally file as JSON (including any extra entries).
config::Json read_tally_header(std::istream& is);
/// Direct impact records are not restored. Throws ConfigError on malformed input.
SamplePlaneTally load_tally(std::istream& is);

/// Counters and ratio as a JSON object.
config::Json tally_summary_json(const SamplePlaneTally& tally);

}  // namespace siv::pinhole
