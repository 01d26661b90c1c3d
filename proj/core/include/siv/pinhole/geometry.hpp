#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "siv/stopping/geometry.hpp"
#include "siv/stopping/material.hpp"
#include "siv/types.hpp"

namespace siv::pinhole {

/// Conical aperture in a flat foil. The foil occupies 0 <= z <= thickness in
/// its own frame, with the beam entering at z = 0. The hole radius is
/// diameter/2 at z = 0 and widens downstream as R(z) = R0 + z cot(wall_angle),
/// so at radius r > R0 the axial wall thickness is (r - R0) tan(wall_angle).
struct PinholeGeometry {
  double diameter_um = 1.0;
  double foil_thickness_um = 27.5;
  double wall_angle_deg = 40.0;
  /// Rotation of the foil about the lab y axis (horizontal) and x axis (vertical).
  double tilt_horizontal_deg = 0.0;
  double tilt_vertical_deg = 0.0;
  stopping::TargetMaterial material = stopping::TargetMaterial::steel();

  /// Throws ConfigError unless 0 < wall_angle <= 90, diameter > 0,
  /// thickness > 0 and tilts are finite.
  void validate() const;

  /// Lab-to-foil rotation.
  Mat3 lab_to_foil() const;
};

/// Material path length (µm) along the full line through lab point
/// (entry_point, z = 0) with lab direction `direction` (positive z component).
double path_length_in_wall(const PinholeGeometry& geom, const Vec2& entry_point_um,
                           const Vec3& direction);

/// The pinhole foil as a transport geometry, in the foil frame and in nm.
class ConicalWall final : public stopping::Geometry {
 public:
  explicit ConicalWall(const PinholeGeometry& geom);

  std::span<const stopping::TargetMaterial> materials() const override { return material_; }
  int material_at(const Vec3& p) const override;
  double distance_to_boundary(const Vec3& p, const Vec3& dir) const override;
  Vec3 surface_normal(const Vec3& p) const override;
  /// Distance to the nearest of the back face and the hole surface. The
  /// entrance face is excluded: ions leaving upstream never reach the sample.
  double escape_distance(const Vec3& p) const override;
  double safety_distance(const Vec3& p) const override;

  double thickness_nm() const noexcept { return thickness_; }
  double hole_radius_nm(double z_nm) const noexcept { return r0_ + z_nm * cot_; }

  /// Sorted distances along the line p + t dir (any sign of t) at which the
  /// line crosses a material boundary.
  std::vector<double> crossings(const Vec3& p, const Vec3& dir) const;

 private:
  bool inside(const Vec3& p) const;
  template <class Visit>
  void for_each_crossing(const Vec3& p, const Vec3& dir, Visit&& visit) const;
  std::vector<stopping::TargetMaterial> material_;
  double r0_;
  double thickness_;
  double cot_;
  double sin_;
  double cos_;
};

}  // namespace siv::pinhole
