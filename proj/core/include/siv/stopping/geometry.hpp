#pragma once

#include <limits>
#include <span>
#include <vector>

#include "siv/stopping/material.hpp"
#include "siv/types.hpp"

namespace siv::stopping {

inline constexpr double kNoBoundary = std::numeric_limits<double>::infinity();

/// Material-region description used by the transport. Lengths in nm.
class Geometry {
 public:
  virtual ~Geometry() = default;

  /// All materials referenced by material_at().
  virtual std::span<const TargetMaterial> materials() const = 0;

  /// Index into materials() of the region containing `p`, or -1 for vacuum.
  virtual int material_at(const Vec3& p) const = 0;

  /// Distance along the unit vector `dir` to the next region boundary,
  /// ignoring crossings closer than a few 1e-9 nm. kNoBoundary if none.
  virtual double distance_to_boundary(const Vec3& p, const Vec3& dir) const = 0;

  /// Outward unit normal of the material surface at boundary point `p`.
  virtual Vec3 surface_normal(const Vec3& p) const = 0;

  /// Lower bound on the straight-line distance from `p` (inside material) to
  /// any surface through which a transmitted ion is of interest. Zero
  /// disables range-based termination.
  virtual double escape_distance(const Vec3& /*p*/) const { return 0.0; }

  /// Lower bound on the distance from `p` to any boundary in any direction.
  /// Zero (always query distance_to_boundary) unless overridden.
  virtual double safety_distance(const Vec3& /*p*/) const { return 0.0; }
};

/// No material anywhere.
class VacuumGeometry final : public Geometry {
 public:
  std::span<const TargetMaterial> materials() const override { return {}; }
  int material_at(const Vec3&) const override { return -1; }
  double distance_to_boundary(const Vec3&, const Vec3&) const override { return kNoBoundary; }
  Vec3 surface_normal(const Vec3&) const override { return Vec3::UnitZ(); }
};

/// Laterally infinite slabs stacked along z.
class SlabStack final : public Geometry {
 public:
  struct Slab {
    double z_min_nm;
    double z_max_nm;
    TargetMaterial material;
  };

  /// Throws ConfigError if any two slabs overlap or a slab is empty.
  explicit SlabStack(std::vector<Slab> slabs);

  std::span<const TargetMaterial> materials() const override { return materials_; }
  int material_at(const Vec3& p) const override;
  double distance_to_boundary(const Vec3& p, const Vec3& dir) const override;
  Vec3 surface_normal(const Vec3& p) const override;
  double safety_distance(const Vec3& p) const override;

 private:
  std::vector<double> z_min_;
  std::vector<double> z_max_;
  std::vector<TargetMaterial> materials_;
};

}  // namespace siv::stopping
