#include "siv/pinhole/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "siv/errors.hpp"

namespace siv::pinhole {

namespace {
constexpr double kMinCrossing = 1e-9;
double deg2rad(double d) { return d * constants::kPi / 180.0; }
}  // namespace

void PinholeGeometry::validate() const {
  if (!(wall_angle_deg > 0 && wall_angle_deg <= 90))
    throw ConfigError("wall_angle must be in (0, 90] degrees");
  if (!(diameter_um > 0)) throw ConfigError("pinhole diameter must be positive");
  if (!(foil_thickness_um > 0)) throw ConfigError("foil thickness must be positive");
  if (!std::isfinite(tilt_horizontal_deg) || !std::isfinite(tilt_vertical_deg))
    throw ConfigError("pinhole tilts must be finite");
}

Mat3 PinholeGeometry::lab_to_foil() const {
  using Eigen::AngleAxisd;
  return (AngleAxisd(deg2rad(tilt_vertical_deg), Vec3::UnitX()) *
          AngleAxisd(deg2rad(tilt_horizontal_deg), Vec3::UnitY()))
      .toRotationMatrix();
}

ConicalWall::ConicalWall(const PinholeGeometry& geom)
    : material_{geom.material},
      r0_(0.5 * geom.diameter_um * constants::kNmPerUm),
      thickness_(geom.foil_thickness_um * constants::kNmPerUm) {
  geom.validate();
  if (geom.wall_angle_deg == 90.0) {
    cot_ = 0;
    sin_ = 1;
    cos_ = 0;
  } else {
    const double a = deg2rad(geom.wall_angle_deg);
    cot_ = 1.0 / std::tan(a);
    sin_ = std::sin(a);
    cos_ = std::cos(a);
  }
}

bool ConicalWall::inside(const Vec3& p) const {
  if (p.z() < 0 || p.z() >= thickness_) return false;
  const double r = hole_radius_nm(p.z());
  return p.x() * p.x() + p.y() * p.y() >= r * r;
}

int ConicalWall::material_at(const Vec3& p) const { return inside(p) ? 0 : -1; }

template <class Visit>
void ConicalWall::for_each_crossing(const Vec3& p, const Vec3& d, Visit&& visit) const {
  if (d.z() != 0) {
    for (double plane : {0.0, thickness_}) {
      const double t = (plane - p.z()) / d.z();
      const double x = p.x() + t * d.x(), y = p.y() + t * d.y();
      const double r = hole_radius_nm(plane);
      if (x * x + y * y >= r * r) visit(t);
    }
  }
  // rho^2 = (r0 + cot z)^2 along the line.
  const double rz = r0_ + cot_ * p.z();
  const double a = d.x() * d.x() + d.y() * d.y() - cot_ * cot_ * d.z() * d.z();
  const double b = 2.0 * (p.x() * d.x() + p.y() * d.y() - cot_ * rz * d.z());
  const double c = p.x() * p.x() + p.y() * p.y() - rz * rz;
  auto cone_root = [&](double t) {
    const double z = p.z() + t * d.z();
    if (z >= 0 && z <= thickness_) visit(t);
  };
  if (std::abs(a) < 1e-12) {
    if (b != 0) cone_root(-c / b);
    return;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0) return;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q != 0) {
    cone_root(q / a);
    cone_root(c / q);
  } else {
    cone_root(0.0);
  }
}

std::vector<double> ConicalWall::crossings(const Vec3& p, const Vec3& dir) const {
  std::vector<double> out;
  for_each_crossing(p, dir, [&](double t) { out.push_back(t); });
  std::sort(out.begin(), out.end());
  return out;
}

double ConicalWall::distance_to_boundary(const Vec3& p, const Vec3& dir) const {
  double best = stopping::kNoBoundary;
  for_each_crossing(p, dir, [&](double t) {
    if (t > kMinCrossing && t < best) best = t;
  });
  return best;
}

Vec3 ConicalWall::surface_normal(const Vec3& p) const {
  const double rho = std::hypot(p.x(), p.y());
  const double d_front = std::abs(p.z());
  const double d_back = std::abs(p.z() - thickness_);
  const double d_cone = std::abs(rho - hole_radius_nm(p.z())) * sin_;
  if (d_cone <= d_front && d_cone <= d_back && rho > 0)
    return {-p.x() / rho * sin_, -p.y() / rho * sin_, cos_};
  return d_front <= d_back ? Vec3(0, 0, -1) : Vec3(0, 0, 1);
}

double ConicalWall::escape_distance(const Vec3& p) const {
  const double rho = std::sqrt(p.x() * p.x() + p.y() * p.y());
  const double to_cone = (rho - hole_radius_nm(p.z())) * sin_;
  return std::max(0.0, std::min(thickness_ - p.z(), to_cone));
}

double ConicalWall::safety_distance(const Vec3& p) const {
  return std::min(escape_distance(p), std::max(0.0, p.z()));
}

double path_length_in_wall(const PinholeGeometry& geom, const Vec2& entry_point_um,
                           const Vec3& direction) {
  const ConicalWall wall(geom);
  const Mat3 r = geom.lab_to_foil();
  const Vec3 p = r * Vec3(entry_point_um.x(), entry_point_um.y(), 0.0) * constants::kNmPerUm;
  const Vec3 d = (r * direction).normalized();
  const auto ts = wall.crossings(p, d);
  if (ts.empty()) return wall.material_at(p) >= 0 ? stopping::kNoBoundary : 0.0;
  double total = 0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double mid = 0.5 * (ts[i] + ts[i + 1]);
    if (wall.material_at(p + mid * d) >= 0) total += ts[i + 1] - ts[i];
  }
  if (wall.material_at(p + (ts.front() - 1.0) * d) >= 0 ||
      wall.material_at(p + (ts.back() + 1.0) * d) >= 0)
    return stopping::kNoBoundary;
  return total / constants::kNmPerUm;
}

}  // namespace siv::pinhole
