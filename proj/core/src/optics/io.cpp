#include "siv/optics/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "siv/errors.hpp"

namespace siv::optics {

OpticsConfig optics_from_json(const config::Json& j) {
  OpticsConfig o;
  o.emission_wavelength_nm = config::number_or(j, "emission_wavelength_nm", o.emission_wavelength_nm);
  o.numerical_aperture = config::number_or(j, "na", o.numerical_aperture);
  if (j.contains("psf_fwhm_nm")) o.psf_fwhm_nm = config::require_number(j, "psf_fwhm_nm");
  o.pixel_size_nm = config::number_or(j, "pixel_size_nm", o.pixel_size_nm);
  o.dwell_s = config::number_or(j, "dwell_ms", o.dwell_s * 1e3) * 1e-3;
  o.background_cps = config::number_or(j, "background_cps", o.background_cps);
  o.detection_efficiency = config::number_or(j, "detection_efficiency", o.detection_efficiency);
  o.validate();
  return o;
}

FieldOptions field_options_from_json(const config::Json& j) {
  FieldOptions f;
  f.brightness_cps = config::number_or(j, "brightness_cps", f.brightness_cps);
  f.brightness_sigma = config::number_or(j, "brightness_sigma", f.brightness_sigma);
  f.include_scattered = j.value("include_scattered", f.include_scattered);
  f.position_jitter_um = config::number_or(j, "position_jitter_um", f.position_jitter_um);
  f.depth_nm = config::number_or(j, "depth_nm", f.depth_nm);
  return f;
}

HbtConfig hbt_from_json(const config::Json& j) {
  HbtConfig h;
  h.n_emitters = static_cast<int>(config::number_or(j, "n_emitters", h.n_emitters));
  h.lifetime_ns = config::number_or(j, "lifetime_ns", h.lifetime_ns);
  h.detection_efficiency = config::number_or(j, "detection_efficiency", h.detection_efficiency);
  h.shelving_probability = config::number_or(j, "shelving_probability", h.shelving_probability);
  h.shelf_lifetime_ns = config::number_or(j, "shelf_lifetime_ns", h.shelf_lifetime_ns);
  h.duration_s = config::number_or(j, "duration_s", h.duration_s);
  h.bin_width_ns = config::number_or(j, "bin_width_ns", h.bin_width_ns);
  h.max_delay_ns = config::number_or(j, "max_delay_ns", h.max_delay_ns);
  h.excitation_rate_per_ns = config::number_or(j, "excitation_rate_per_ns", h.excitation_rate_per_ns);
  if (j.contains("target_rate_cps"))
    h.excitation_rate_per_ns = excitation_rate_for(config::require_number(j, "target_rate_cps"), h);
  h.validate();
  return h;
}

void write_map_binary(const std::filesystem::path& path, const ConfocalMap& map,
                      const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << std::setprecision(17) << "SIVMAP 1\n"
     << "nx=" << map.nx << "\nny=" << map.ny << "\npixel_size_nm=" << map.pixel_size_nm
     << "\ndwell_ms=" << map.dwell_s * 1e3 << "\norigin_x_um=" << map.origin_x_um
     << "\norigin_y_um=" << map.origin_y_um << '\n';
  for (const auto& [k, v] : extra) os << k << '=' << v << '\n';
  os << "END_HEADER\n";
  for (std::uint32_t c : map.counts) {
    if constexpr (std::endian::native == std::endian::big) c = __builtin_bswap32(c);
    os.write(reinterpret_cast<const char*>(&c), sizeof c);
  }
  if (!os) throw ConfigError("failed writing " + path.string());
}

ConfocalMap read_map_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open map " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != "SIVMAP 1") throw ConfigError("not a map file: " + path.string());
  ConfocalMap map;
  bool have_nx = false, have_ny = false, have_px = false, end = false;
  while (std::getline(is, line)) {
    if (line == "END_HEADER") {
      end = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed map header line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    try {
      if (key == "nx") map.nx = std::stoull(val), have_nx = true;
      else if (key == "ny") map.ny = std::stoull(val), have_ny = true;
      else if (key == "pixel_size_nm") map.pixel_size_nm = std::stod(val), have_px = true;
      else if (key == "dwell_ms") map.dwell_s = std::stod(val) * 1e-3;
      else if (key == "origin_x_um") map.origin_x_um = std::stod(val);
      else if (key == "origin_y_um") map.origin_y_um = std::stod(val);
    } catch (const std::exception&) {
      throw ConfigError("bad value in map header: " + line);
    }
  }
  if (!end || !have_nx || !have_ny || !have_px) throw ConfigError("incomplete map header in " + path.string());
  map.counts.resize(map.nx * map.ny);
  is.read(reinterpret_cast<char*>(map.counts.data()),
          static_cast<std::streamsize>(map.counts.size() * sizeof(std::uint32_t)));
  if (static_cast<std::size_t>(is.gcount()) != map.counts.size() * sizeof(std::uint32_t))
    throw ConfigError("truncated map data in " + path.string());
  if constexpr (std::endian::native == std::endian::big)
    for (auto& c : map.counts) c = __builtin_bswap32(c);
  return map;
}

void write_map_csv(std::ostream& os, const ConfocalMap& map) {
  os << "x_um,y_um,counts\n" << std::setprecision(10);
  for (std::size_t iy = 0; iy < map.ny; ++iy)
    for (std::size_t ix = 0; ix < map.nx; ++ix)
      os << map.x_um(ix) << ',' << map.y_um(iy) << ',' << map.at(ix, iy) << '\n';
}

void write_field_csv(std::ostream& os, const EmitterField& field) {
  os << "x_um,y_um,depth_nm,brightness_cps,origin,spot_index\n" << std::setprecision(10);
  for (const auto& e : field.emitters)
    os << e.position_um.x() << ',' << e.position_um.y() << ',' << e.depth_nm << ',' << e.brightness_cps
       << ',' << (e.origin == EmitterOrigin::kDirect ? "direct" : "scattered") << ',' << e.spot_index
       << '\n';
}

void write_histogram_csv(std::ostream& os, const CoincidenceHistogram& hist) {
  os << std::setprecision(12) << "# rate_a_cps=" << hist.rate_a_cps << "\n# rate_b_cps=" << hist.rate_b_cps
     << "\n# duration_s=" << hist.duration_s << "\n# plateau_min_delay_ns=" << hist.plateau_min_delay_ns
     << "\ndelay_ns,counts,g2_normalized\n";
  std::vector<double> g2;
  try {
    g2 = normalized_g2(hist);
  } catch (const NormalizationError&) {
  }
  for (std::size_t i = 0; i < hist.size(); ++i) {
    os << hist.delay_ns(i) << ',' << hist.counts[i] << ',';
    if (!g2.empty()) os << g2[i];
    os << '\n';
  }
}

CoincidenceHistogram read_histogram_csv(std::istream& is) {
  CoincidenceHistogram h;
  std::vector<double> delays;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const double v = std::strtod(line.c_str() + eq + 1, nullptr);
      if (key == "rate_a_cps") h.rate_a_cps = v;
      else if (key == "rate_b_cps") h.rate_b_cps = v;
      else if (key == "duration_s") h.duration_s = v;
      else if (key == "plateau_min_delay_ns") h.plateau_min_delay_ns = v;
      continue;
    }
    if (!header) {
      if (line.rfind("delay_ns,counts", 0) != 0) throw ConfigError("histogram CSV lacks its header");
      header = true;
      continue;
    }
    std::istringstream row(line);
    double d = 0;
    double c = 0;
    char comma = 0;
    if (!(row >> d >> comma >> c) || comma != ',' || c < 0)
      throw ConfigError("malformed histogram row: " + line);
    delays.push_back(d);
    h.counts.push_back(static_cast<std::uint64_t>(std::llround(c)));
  }
  if (delays.size() < 2) throw ConfigError("histogram needs at least two bins");
  h.bin_width_ns = delays[1] - delays[0];
  if (!(h.bin_width_ns > 0)) throw ConfigError("histogram delays must increase");
  for (std::size_t i = 1; i < delays.size(); ++i)
    if (std::abs(delays[i] - delays[i - 1] - h.bin_width_ns) > 1e-6 * h.bin_width_ns)
      throw ConfigError("histogram bins are not uniform");
  h.min_delay_ns = delays[0] - 0.5 * h.bin_width_ns;
  return h;
}

}  // namespace siv::optics
