#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "siv/config.hpp"
#include "siv/optics/confocal.hpp"
#include "siv/optics/field.hpp"
#include "siv/optics/hbt.hpp"

namespace siv::optics {

/// Keys: emission_wavelength_nm, na, psf_fwhm_nm, pixel_size_nm, dwell_ms,
/// background_cps, detection_efficiency.
OpticsConfig optics_from_json(const config::Json& j);

/// Keys: brightness_cps, brightness_sigma, include_scattered,
/// position_jitter_um, depth_nm.
FieldOptions field_options_from_json(const config::Json& j);

/// Keys: n_emitters, lifetime_ns, excitation_rate_per_ns or
/// target_rate_cps, detection_efficiency, shelving_probability,
/// shelf_lifetime_ns, duration_s, bin_width_ns, max_delay_ns.
HbtConfig hbt_from_json(const config::Json& j);

/// Text header (`SIVMAP 1`, then key=value lines for nx, ny, pixel_size_nm,
/// dwell_ms, origin_x_um, origin_y_um, terminated by `END_HEADER`) followed
/// by nx*ny little-endian uint32 counts, row-major. `extra` lines
/// (key=value) go into the header and are ignored by the reader.
void write_map_binary(const std::filesystem::path& path, const ConfocalMap& map,
                      const std::vector<std::pair<std::string, std::string>>& extra = {});
/// Throws ConfigError on a malformed file.
ConfocalMap read_map_binary(const std::filesystem::path& path);

/// `x_um,y_um,counts`, one row per pixel.
void write_map_csv(std::ostream& os, const ConfocalMap& map);

/// `x_um,y_um,depth_nm,brightness_cps,origin,spot_index`.
void write_field_csv(std::ostream& os, const EmitterField& field);

/// `delay_ns,counts,g2_normalized` preceded by `# key=value` lines for the
/// singles rates, duration and plateau threshold. g2_normalized is empty
/// when the plateau is unpopulated.
void write_histogram_csv(std::ostream& os, const CoincidenceHistogram& hist);
/// Reads the format above (comment lines other than the known keys are
/// ignored). Throws ConfigError on non-uniform bins or malformed rows.
CoincidenceHistogram read_histogram_csv(std::istream& is);

}  // namespace siv::optics
