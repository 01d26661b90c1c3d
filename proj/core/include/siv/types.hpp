#pragma once

#include <Eigen/Core>

namespace siv {

using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

namespace constants {
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kAvogadro = 6.02214076e23;
/// Bohr radius in nm.
inline constexpr double kBohrRadiusNm = 0.0529177210903;
/// e^2 / (4 pi eps0) in eV nm.
inline constexpr double kCoulombEvNm = 1.439964547;
inline constexpr double kNmPerCm = 1.0e7;
inline constexpr double kUmPerCm = 1.0e4;
inline constexpr double kNmPerUm = 1.0e3;
}  // namespace constants

}  // namespace siv
