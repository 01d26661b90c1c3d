#include "siv/pinhole/io.hpp"

#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "siv/errors.hpp"

#include "siv/stopping/io.hpp"

namespace siv::pinhole {

PinholeGeometry geometry_from_json(const config::Json& j) {
  PinholeGeometry g;
  g.diameter_um = config::number_or(j, "diameter_um", g.diameter_um);
  g.foil_thickness_um = config::number_or(j, "foil_thickness_um", g.foil_thickness_um);
  g.wall_angle_deg = config::number_or(j, "wall_angle_deg", g.wall_angle_deg);
  g.tilt_horizontal_deg = config::number_or(j, "tilt_horizontal_deg", g.tilt_horizontal_deg);
  g.tilt_vertical_deg = config::number_or(j, "tilt_vertical_deg", g.tilt_vertical_deg);
  if (j.contains("material")) g.material = stopping::material_from_json(j.at("material"));
  g.validate();
  return g;
}

BeamSpec beam_from_json(const config::Json& j) {
  BeamSpec b;
  if (j.contains("ion")) b.ion = stopping::ion_from_json(j.at("ion"));
  b.energy_mev = config::number_or(j, "energy_mev", b.energy_mev);
  b.divergence_mrad = config::number_or(j, "divergence_mrad", b.divergence_mrad);
  if (j.contains("lateral_radius_um"))
    b.lateral_radius_um = config::require_number(j, "lateral_radius_um");
  b.fluence_cm2 = config::number_or(j, "fluence_cm2", b.fluence_cm2);
  b.validate();
  return b;
}

void write_radial_profile_csv(std::ostream& os, const RadialProfile& profile) {
  os << "radius_um,relative_density\n";
  for (const auto& b : profile.bins) os << b.radius_um << ',' << b.relative_density << '\n';
}

void write_direct_histogram_csv(std::ostream& os, const SamplePlaneTally& t) {
  os << "x_um,y_um,counts\n";
  const auto n = t.direct_bins_per_axis();
  const auto& h = t.direct_histogram();
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix)
      if (const auto c = h[iy * n + ix])
        os << t.direct_bin_center_um(ix) << ',' << t.direct_bin_center_um(iy) << ',' << c << '\n';
}

config::Json tally_summary_json(const SamplePlaneTally& t) {
  config::Json j{{"distance_mm", t.distance_mm()},
                 {"launched", t.launched},
                 {"direct", t.direct},
                 {"scattered", t.scattered},
                 {"stopped_in_wall", t.stopped_in_wall},
                 {"blocked", t.blocked},
                 {"warnings", t.warnings}};
  j["scattered_to_direct"] = t.direct > 0 ? config::Json(scattered_to_direct_ratio(t)) : config::Json();
  return j;
}

void save_tally(std::ostream& os, const SamplePlaneTally& t, const config::Json& extra) {
  const auto& b = t.binning();
  const auto& h = t.direct_histogram();
  std::uint64_t binned = 0;
  for (auto c : h) binned += c;
  config::Json head{{"distance_mm", t.distance_mm()},
                          {"direct_bin_nm", b.direct_bin_nm},
                          {"direct_half_width_um", b.direct_half_width_um},
                          {"radial_bin_um", b.radial_bin_um},
                          {"radial_max_um", b.radial_max_um},
                          {"direct_unbinned", t.direct - binned},
                          {"stopped_in_wall", t.stopped_in_wall},
                          {"blocked", t.blocked},
                          {"warnings", t.warnings}};
  if (extra.is_object())
    for (const auto& [k, v] : extra.items()) head[k] = v;
  os << "SIVTALLY 1\n" << head.dump() << "\nDIRECT\n";
  const auto n = t.direct_bins_per_axis();
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i]) os << i % n << ',' << i / n << ',' << h[i] << '\n';
  os << "IMPACTS\n" << std::setprecision(9);
  for (const auto& r : t.impacts())
    if (r.scattered) os << r.x_um << ',' << r.y_um << ',' << r.energy_ev << '\n';
}

config::Json read_tally_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "SIVTALLY 1") throw ConfigError("not a tally file");
  if (!std::getline(is, line)) throw ConfigError("tally file is truncated");
  try {
    return config::Json::parse(line);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed tally header: ") + e.what());
  }
}

SamplePlaneTally load_tally(std::istream& is) {
  const config::Json head = read_tally_header(is);
  std::string line;
  TallyBinning b;
  b.direct_bin_nm = config::require_number(head, "direct_bin_nm");
  b.direct_half_width_um = config::require_number(head, "direct_half_width_um");
  b.radial_bin_um = config::require_number(head, "radial_bin_um");
  b.radial_max_um = config::require_number(head, "radial_max_um");
  SamplePlaneTally t(config::require_number(head, "distance_mm"), b);
  if (!std::getline(is, line) || line != "DIRECT") throw ConfigError("tally file lacks its DIRECT block");
  const auto n = t.direct_bins_per_axis();
  while (std::getline(is, line) && line != "IMPACTS") {
    std::size_t ix = 0, iy = 0;
    unsigned long long c = 0;
    if (std::sscanf(line.c_str(), "%zu,%zu,%llu", &ix, &iy, &c) != 3 || ix >= n || iy >= n)
      throw ConfigError("malformed tally bin: " + line);
    for (unsigned long long k = 0; k < c; ++k)
      t.add_direct(t.direct_bin_center_um(ix), t.direct_bin_center_um(iy), 0.0);
  }
  const auto outside = head.value("direct_unbinned", std::uint64_t{0});
  const double far = 10 * b.direct_half_width_um;
  for (std::uint64_t k = 0; k < outside; ++k) t.add_direct(far, far, 0.0);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double x = 0, y = 0, e = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &e) != 3)
      throw ConfigError("malformed tally impact: " + line);
    t.add_scattered(x, y, e);
  }
  t.add_stopped(head.value("stopped_in_wall", std::uint64_t{0}));
  t.add_blocked(head.value("blocked", std::uint64_t{0}));
  t.warnings = head.value("warnings", std::vector<std::string>{});
  return t;
}

}  // namespace siv::pinhole
