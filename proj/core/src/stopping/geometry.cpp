#include "siv/stopping/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "siv/errors.hpp"

namespace siv::stopping {

namespace {
constexpr double kMinCrossing = 1e-9;
}

SlabStack::SlabStack(std::vector<Slab> slabs) {
  std::vector<std::size_t> order(slabs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return slabs[a].z_min_nm < slabs[b].z_min_nm; });
  for (auto i : order) {
    const auto& s = slabs[i];
    if (!(s.z_max_nm > s.z_min_nm)) throw ConfigError("slab must have z_max > z_min");
    if (!z_max_.empty() && s.z_min_nm < z_max_.back())
      throw ConfigError("geometry has overlapping regions");
    z_min_.push_back(s.z_min_nm);
    z_max_.push_back(s.z_max_nm);
    materials_.push_back(s.material);
  }
}

int SlabStack::material_at(const Vec3& p) const {
  for (std::size_t i = 0; i < z_min_.size(); ++i)
    if (p.z() >= z_min_[i] && p.z() < z_max_[i]) return static_cast<int>(i);
  return -1;
}

double SlabStack::distance_to_boundary(const Vec3& p, const Vec3& dir) const {
  if (dir.z() == 0) return kNoBoundary;
  double best = kNoBoundary;
  for (std::size_t i = 0; i < z_min_.size(); ++i) {
    for (double plane : {z_min_[i], z_max_[i]}) {
      const double t = (plane - p.z()) / dir.z();
      if (t > kMinCrossing) best = std::min(best, t);
    }
  }
  return best;
}

double SlabStack::safety_distance(const Vec3& p) const {
  double best = kNoBoundary;
  for (std::size_t i = 0; i < z_min_.size(); ++i)
    best = std::min({best, std::abs(p.z() - z_min_[i]), std::abs(p.z() - z_max_[i])});
  return best;
}

Vec3 SlabStack::surface_normal(const Vec3& p) const {
  const Vec3 up = p + Vec3(0, 0, 1e-6);
  return material_at(up) >= 0 ? Vec3(0, 0, -1) : Vec3(0, 0, 1);
}

}  // namespace siv::stopping
