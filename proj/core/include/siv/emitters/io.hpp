#pragma once

#include <iosfwd>

#include "siv/config.hpp"
#include "siv/emitters/session.hpp"
#include "siv/emitters/stats.hpp"

namespace siv::emitters {

/// `{"preset": "A"}` optionally overridden by label, energy_mev,
/// fluences_cm2 (array), ladder_axis ("rows" | "columns"), separation_um,
/// rows, columns, marker_offset_um, marker_fluence_cm2.
SessionSpec session_from_json(const config::Json& j);

/// `{"default_yield": 0.021, "constant_below_1e12": true,
///   "table": [{"energy_mev": 2.9, "fluence_cm2": 1e13, "yield": 0.03}]}`
YieldModel yield_model_from_json(const config::Json& j);
config::Json yield_model_to_json(const YieldModel& m);

CalibrationConstants calibration_from_json(const config::Json& j);

/// `x_um,y_um,fluence_cm2,expected_ions,expected_emitters`, matrix spots then markers.
void write_plan_csv(std::ostream& os, const ImplantPlan& plan);

/// Plan file read by the synthesis stage.
config::Json plan_to_json(const ImplantPlan& plan);
ImplantPlan plan_from_json(const config::Json& j);

}  // namespace siv::emitters
