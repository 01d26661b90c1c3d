#include "siv/emitters/io.hpp"

#include <ostream>

#include "siv/errors.hpp"

namespace siv::emitters {

SessionSpec session_from_json(const config::Json& j) {
  SessionSpec s = j.contains("preset") ? session_preset(j.at("preset").get<std::string>())
                                       : SessionSpec{};
  if (j.contains("label")) s.label = j.at("label").get<std::string>();
  s.energy_mev = config::number_or(j, "energy_mev", s.energy_mev);
  if (j.contains("fluences_cm2")) s.fluence_ladder_cm2 = j.at("fluences_cm2").get<std::vector<double>>();
  if (j.contains("ladder_axis")) {
    const auto a = j.at("ladder_axis").get<std::string>();
    if (a == "rows") s.ladder_axis = LadderAxis::kRows;
    else if (a == "columns") s.ladder_axis = LadderAxis::kColumns;
    else throw ConfigError("ladder_axis must be 'rows' or 'columns'");
  }
  s.separation_um = config::number_or(j, "separation_um", s.separation_um);
  s.rows = static_cast<int>(config::number_or(j, "rows", s.rows));
  s.columns = static_cast<int>(config::number_or(j, "columns", s.columns));
  if (j.contains("marker_offset_um")) s.marker_offset_um = config::require_number(j, "marker_offset_um");
  s.marker_fluence_cm2 = config::number_or(j, "marker_fluence_cm2", s.marker_fluence_cm2);
  s.validate();
  return s;
}

YieldModel yield_model_from_json(const config::Json& j) {
  std::vector<YieldPoint> pts;
  if (j.contains("table"))
    for (const auto& e : j.at("table"))
      pts.push_back({config::require_number(e, "energy_mev"), config::require_number(e, "fluence_cm2"),
                     config::require_number(e, "yield")});
  return YieldModel(std::move(pts), config::number_or(j, "default_yield", kDefaultPlanningYield),
                    j.value("constant_below_1e12", true));
}

config::Json yield_model_to_json(const YieldModel& m) {
  config::Json table = config::Json::array();
  for (const auto& p : m.points())
    table.push_back({{"energy_mev", p.energy_mev}, {"fluence_cm2", p.fluence_cm2}, {"yield", p.yield}});
  return {{"default_yield", m.default_yield()},
          {"constant_below_1e12", m.constant_below_1e12()},
          {"table", table}};
}

CalibrationConstants calibration_from_json(const config::Json& j) {
  CalibrationConstants c;
  c.single_emitter_rate_cps = config::number_or(j, "single_emitter_rate_cps", c.single_emitter_rate_cps);
  c.single_emitter_rate_sigma_cps =
      config::number_or(j, "single_emitter_rate_sigma_cps", c.single_emitter_rate_sigma_cps);
  c.excitation_power_mw = config::number_or(j, "excitation_power_mw", c.excitation_power_mw);
  c.excitation_wavelength_nm = config::number_or(j, "excitation_wavelength_nm", c.excitation_wavelength_nm);
  c.numerical_aperture = config::number_or(j, "na", c.numerical_aperture);
  c.detection_efficiency = config::number_or(j, "detection_efficiency", c.detection_efficiency);
  c.validate();
  return c;
}

void write_plan_csv(std::ostream& os, const ImplantPlan& plan) {
  os << "x_um,y_um,fluence_cm2,expected_ions,expected_emitters\n";
  auto row = [&](const PlannedSpot& s) {
    os << s.position_um.x() << ',' << s.position_um.y() << ',' << s.fluence_cm2 << ','
       << s.expected_ions << ',' << s.expected_emitters << '\n';
  };
  for (const auto& s : plan.spots) row(s);
  for (const auto& s : plan.markers) row(s);
}

namespace {

config::Json spot_json(const PlannedSpot& s) {
  return {{"x_um", s.position_um.x()}, {"y_um", s.position_um.y()},
          {"fluence_cm2", s.fluence_cm2}, {"expected_ions", s.expected_ions},
          {"expected_emitters", s.expected_emitters}, {"row", s.row},
          {"column", s.column}, {"marker", s.marker}};
}

PlannedSpot spot_from(const config::Json& j) {
  return {Vec2(config::require_number(j, "x_um"), config::require_number(j, "y_um")),
          config::require_number(j, "fluence_cm2"), config::require_number(j, "expected_ions"),
          config::require_number(j, "expected_emitters"), j.value("row", 0), j.value("column", 0),
          j.value("marker", false)};
}

}  // namespace

config::Json plan_to_json(const ImplantPlan& plan) {
  config::Json spots = config::Json::array(), markers = config::Json::array();
  for (const auto& s : plan.spots) spots.push_back(spot_json(s));
  for (const auto& s : plan.markers) markers.push_back(spot_json(s));
  return {{"label", plan.label},
          {"energy_mev", plan.energy_mev},
          {"spot_area_cm2", plan.spot_area_cm2},
          {"throughput_correction", plan.throughput_correction},
          {"spots", spots},
          {"markers", markers},
          {"warnings", plan.warnings}};
}

ImplantPlan plan_from_json(const config::Json& j) {
  ImplantPlan p;
  p.label = j.value("label", std::string());
  p.energy_mev = config::require_number(j, "energy_mev");
  p.spot_area_cm2 = config::number_or(j, "spot_area_cm2", kNominalSpotAreaCm2);
  p.throughput_correction = config::number_or(j, "throughput_correction", 1.0);
  if (!j.contains("spots")) throw ConfigError("plan file has no 'spots'");
  for (const auto& s : j.at("spots")) p.spots.push_back(spot_from(s));
  if (j.contains("markers"))
    for (const auto& s : j.at("markers")) p.markers.push_back(spot_from(s));
  if (j.contains("warnings")) p.warnings = j.at("warnings").get<std::vector<std::string>>();
  return p;
}

}  // namespace siv::emitters
