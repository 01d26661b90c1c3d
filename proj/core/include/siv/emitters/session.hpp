#pragma once

#include <optional>
#include <string>
#include <vector>

#include "siv/emitters/stats.hpp"
#include "siv/types.hpp"

namespace siv::emitters {

enum class LadderAxis { kRows, kColumns };

struct SessionSpec {
  std::string label;
  double energy_mev = 2.9;
  /// One fluence per row or column (see ladder_axis), or a single value
  /// used for every spot.
  std::vector<double> fluence_ladder_cm2;
  LadderAxis ladder_axis = LadderAxis::kRows;
  double separation_um = 5.0;
  int rows = 1;
  int columns = 1;
  /// Marker spots placed this far left and right of the matrix row 0.
  std::optional<double> marker_offset_um;
  double marker_fluence_cm2 = 1e13;

  /// Throws ConfigError on empty grids, non-positive separation or
  /// fluences, or a ladder whose length matches neither 1 nor its axis.
  void validate() const;
};

/// {start, start/2, start/4, ...}, n entries.
std::vector<double> halving_ladder(double start_cm2, int n);
/// n values from `high` to `low`, evenly spaced in log fluence.
std::vector<double> log_ladder(double high_cm2, double low_cm2, int n);

/// Presets for sessions A-D. Throws ConfigError for an unknown label.
SessionSpec session_preset(const std::string& label);

struct PlannedSpot {
  Vec2 position_um;
  double fluence_cm2;
  double expected_ions;
  double expected_emitters;
  int row;
  int column;
  bool marker = false;
};

struct ImplantPlan {
  std::string label;
  double energy_mev = 0;
  double spot_area_cm2 = kNominalSpotAreaCm2;
  double throughput_correction = 1.0;
  std::vector<PlannedSpot> spots;    // matrix spots, row-major
  std::vector<PlannedSpot> markers;  // alignment markers, if any
  std::vector<std::string> warnings;
};

struct PlanOptions {
  double spot_area_cm2 = kNominalSpotAreaCm2;
  double throughput_correction = 1.0;
};

/// Row r, column c sits at (c, r) * separation. Expected ions are
/// fluence * spot_area * throughput_correction and expected emitters are
/// yield * expected ions. Fluences outside 1e8-1e14 cm^-2 add a warning.
ImplantPlan plan_session(const SessionSpec& spec, const YieldModel& yield_model = {},
                         const PlanOptions& options = {});

}  // namespace siv::emitters
