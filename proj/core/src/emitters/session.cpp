#include "siv/emitters/session.hpp"

#include <cmath>

#include "siv/errors.hpp"

namespace siv::emitters {

void SessionSpec::validate() const {
  if (rows < 1 || columns < 1) throw ConfigError("session needs at least one row and column");
  if (!(separation_um > 0)) throw ConfigError("spot separation must be positive");
  if (!(energy_mev > 0)) throw ConfigError("session energy must be positive");
  if (fluence_ladder_cm2.empty()) throw ConfigError("session needs a fluence ladder");
  for (double f : fluence_ladder_cm2)
    if (!(f > 0)) throw ConfigError("fluences must be positive");
  const auto axis_len = static_cast<std::size_t>(ladder_axis == LadderAxis::kRows ? rows : columns);
  if (fluence_ladder_cm2.size() != 1 && fluence_ladder_cm2.size() != axis_len)
    throw ConfigError("fluence ladder length must be 1 or match the ladder axis");
  if (marker_offset_um && !(*marker_offset_um > 0 && marker_fluence_cm2 > 0))
    throw ConfigError("marker offset and fluence must be positive");
}

std::vector<double> halving_ladder(double start_cm2, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(std::ldexp(start_cm2, -i));
  return out;
}

std::vector<double> log_ladder(double high_cm2, double low_cm2, int n) {
  if (n == 1) return {high_cm2};
  std::vector<double> out;
  const double lh = std::log10(high_cm2), ll = std::log10(low_cm2);
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, lh + (ll - lh) * i / (n - 1)));
  return out;
}

SessionSpec session_preset(const std::string& label) {
  SessionSpec s;
  s.label = label;
  if (label == "A" || label == "B") {
    s.energy_mev = label == "A" ? 2.9 : 0.4;
    s.rows = 10;
    s.columns = 5;
    s.separation_um = 5.0;
    s.ladder_axis = LadderAxis::kRows;
    s.fluence_ladder_cm2 = log_ladder(1e14, 1e8, 10);
  } else if (label == "C") {
    s.energy_mev = 1.0;
    s.rows = 3;
    s.columns = 8;
    s.separation_um = 10.0;
    s.ladder_axis = LadderAxis::kColumns;
    s.fluence_ladder_cm2 = halving_ladder(1.28e11, 8);
  } else if (label == "D") {
    s.energy_mev = 0.4;
    s.rows = 1;
    s.columns = 5;
    s.separation_um = 10.0;
    s.fluence_ladder_cm2 = {1.6e10};
    s.marker_offset_um = 400.0;
    s.marker_fluence_cm2 = 1e13;
  } else {
    throw ConfigError("unknown session preset '" + label + "' (expected A, B, C or D)");
  }
  return s;
}

ImplantPlan plan_session(const SessionSpec& spec, const YieldModel& yield_model,
                         const PlanOptions& options) {
  spec.validate();
  if (!(options.spot_area_cm2 > 0 && options.throughput_correction > 0))
    throw ConfigError("spot area and throughput correction must be positive");
  ImplantPlan plan;
  plan.label = spec.label;
  plan.energy_mev = spec.energy_mev;
  plan.spot_area_cm2 = options.spot_area_cm2;
  plan.throughput_correction = options.throughput_correction;
  const double area = options.spot_area_cm2 * options.throughput_correction;

  auto make = [&](Vec2 pos, double fluence, int r, int c, bool marker) {
    const double ions = fluence * area;
    return PlannedSpot{pos, fluence, ions, yield_model.yield_at(spec.energy_mev, fluence) * ions,
                       r, c, marker};
  };
  bool out_of_range = false;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.columns; ++c) {
      const auto& lad = spec.fluence_ladder_cm2;
      const std::size_t k = lad.size() == 1 ? 0
                            : spec.ladder_axis == LadderAxis::kRows ? static_cast<std::size_t>(r)
                                                                    : static_cast<std::size_t>(c);
      const double f = lad[k];
      out_of_range = out_of_range || f < 1e8 * (1 - 1e-9) || f > 1e14 * (1 + 1e-9);
      plan.spots.push_back(make(Vec2(c * spec.separation_um, r * spec.separation_um), f, r, c, false));
    }
  }
  if (spec.marker_offset_um) {
    const double width = (spec.columns - 1) * spec.separation_um;
    plan.markers.push_back(make(Vec2(-*spec.marker_offset_um, 0), spec.marker_fluence_cm2, 0, -1, true));
    plan.markers.push_back(
        make(Vec2(width + *spec.marker_offset_um, 0), spec.marker_fluence_cm2, 0, spec.columns, true));
  }
  if (out_of_range) plan.warnings.push_back("fluence outside the supported 1e8-1e14 cm^-2 range");
  return plan;
}

}  // namespace siv::emitters
