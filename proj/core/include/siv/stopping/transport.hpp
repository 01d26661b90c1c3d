#pragma once

#include <memory>
#include <vector>

#include "siv/rng.hpp"
#include "siv/stopping/geometry.hpp"
#include "siv/stopping/material.hpp"
#include "siv/stopping/stopping.hpp"
#include "siv/types.hpp"

namespace siv::stopping {

struct IonState {
  Vec3 position_nm = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();  // unit vector
  double energy_ev = 0;
};

enum class TerminalStatus {
  kStoppedInMaterial,
  kExited,
};

struct TrajectoryPoint {
  Vec3 position_nm;
  double energy_ev;
};

struct TrajectoryRecord {
  /// Start point, then one point per collision and per boundary crossing.
  /// Empty unless path recording was requested.
  std::vector<TrajectoryPoint> points;
  TerminalStatus status = TerminalStatus::kExited;
  /// Exit state for kExited; resting (or abandoned) state otherwise.
  IonState final_state;
  bool entered_material = false;
  /// True if the history was ended because it could no longer reach any
  /// escape surface (Geometry::escape_distance). Status is then
  /// kStoppedInMaterial.
  bool range_terminated = false;
  std::size_t collisions = 0;
  std::size_t surface_reflections = 0;
};

struct TransportOptions {
  /// Keep the full list of trajectory points.
  bool record_path = false;
  /// Specular reflection of ions hitting a material surface below the
  /// Lindhard critical angle for planar channeling off an amorphous surface.
  bool grazing_reflection = true;
  /// End histories once the straight-line distance to the nearest escape
  /// surface exceeds range_termination_margin times the residual CSDA path
  /// length (total stopping) plus one free flight.
  bool range_termination = true;
  double range_termination_margin = 1.5;
};

/// Precomputed per-material tables for repeated BCA histories in one
/// geometry. Thread-safe after construction; each call takes its own RNG.
class Transporter {
 public:
  Transporter(IonSpecies ion, const Geometry& geometry, StoppingModel model = {},
              TransportOptions options = {});
  ~Transporter();
  Transporter(Transporter&&) noexcept;
  Transporter& operator=(Transporter&&) noexcept;

  /// Requires start energy above the model cutoff. The start point may lie
  /// in vacuum or in material.
  TrajectoryRecord run(const IonState& start, rng::Engine& rng) const;

  const IonSpecies& ion() const noexcept { return ion_; }
  const StoppingModel& model() const noexcept { return model_; }

  /// Electronic stopping used by the stepping loop (tabulated in sqrt(E)).
  double stopping_lookup(int material, double energy_ev) const;
  /// Residual path length beyond which range termination applies, nm.
  double residual_path_bound(double energy_ev) const;

 private:
  struct MaterialTables;
  IonSpecies ion_;
  const Geometry* geometry_;
  StoppingModel model_;
  TransportOptions options_;
  std::vector<std::unique_ptr<MaterialTables>> tables_;
};

/// One history with a freshly built Transporter.
TrajectoryRecord transport_ion(const IonSpecies& ion, const Geometry& geometry,
                               const IonState& start, const StoppingModel& model,
                               rng::Engine& rng, TransportOptions options = {});

}  // namespace siv::stopping
