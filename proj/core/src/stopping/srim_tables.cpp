// SRIM-2013 electronic stopping of Si ions, evaluated with the CATIMA 1.7
// implementation of the SRIM coefficients, in eV / (1e15 atoms/cm^2).
// Energy grid: E = 10^(3 + k/8) eV for a 28 u projectile, k = 0..34.

#include <array>
#include <cmath>
#include <optional>

#include "siv/stopping/stopping.hpp"

namespace siv::stopping::detail {
namespace {

constexpr double kTableMassU = 28.0;
constexpr double kLog10EMin = 3.0;
constexpr double kLog10Step = 0.125;
constexpr std::size_t kNodes = 35;

struct Table {
  int target_z;
  std::array<double, kNodes> values;
};

constexpr std::array<Table, 5> kSilicon = {{
    {6, {8.2258, 9.0976, 10.062, 11.128, 12.308, 13.612, 15.055, 16.651, 18.415,
         20.367, 22.526, 24.913, 27.554, 30.474, 33.704, 37.276, 41.227, 45.596,
         50.429, 55.774, 61.685, 69.734, 82.1, 98.251, 118.44, 143.98, 175.27,
         211.64, 250.7, 288.11, 318.88, 339.98, 352.16, 375.65, 390.86}},
    {14, {13.09, 14.478, 16.012, 17.709, 19.586, 21.662, 23.958, 26.497, 29.305,
          32.411, 35.846, 39.645, 43.847, 48.495, 53.634, 59.319, 65.606, 72.559,
          80.25, 88.755, 98.162, 111.85, 139.6, 176.64, 221.9, 277.41, 341.07,
          407.28, 468.02, 516.9, 553.36, 581.77, 606.4, 657.95, 696.82}},
    {24, {4.8192, 5.5651, 6.4265, 7.4212, 8.5698, 9.8963, 11.428, 13.197, 15.24,
          17.598, 20.322, 23.468, 27.1, 31.295, 36.139, 41.732, 48.192, 56.734,
          66.6, 78.9, 94.544, 114.88, 141.89, 182.69, 245.67, 311.43, 380.1,
          456.2, 540.28, 627.72, 712.24, 788.35, 852.62, 943.75, 1006.5}},
    {26, {5.2801, 6.0974, 7.0412, 8.131, 9.3895, 10.843, 12.521, 14.459, 16.697,
          19.282, 22.266, 25.713, 29.692, 34.288, 39.595, 45.724, 52.801, 60.974,
          70.412, 81.31, 93.895, 108.43, 135.23, 174.48, 222.61, 280.06, 355.87,
          444.73, 537.86, 628.73, 713.49, 789.61, 854.82, 950.09, 1021}},
    {28, {4.547, 5.2508, 6.0635, 7.0021, 8.0859, 9.3374, 10.783, 12.452, 14.379,
          16.605, 19.175, 22.143, 25.57, 29.528, 34.098, 39.376, 45.47, 52.508,
          60.883, 72.196, 86.614, 105.39, 130.39, 164.06, 206.99, 259.62, 320.47,
          387.92, 461.99, 543.5, 631.31, 721.08, 806.42, 922.31, 1012}},
}};

// 1e-15 eV cm^2 expressed in eV nm^2.
constexpr double kUnit = 0.1;

}  // namespace

std::optional<double> srim_electronic_per_atom(int ion_z, int target_z, double energy_per_u_ev) {
  if (ion_z != 14) return std::nullopt;
  const Table* table = nullptr;
  for (const auto& t : kSilicon)
    if (t.target_z == target_z) table = &t;
  if (table == nullptr) return std::nullopt;
  if (energy_per_u_ev <= 0) return 0.0;

  const double e = energy_per_u_ev * kTableMassU;
  const double x = (std::log10(e) - kLog10EMin) / kLog10Step;
  const auto& v = table->values;
  if (x <= 0) {
    // Velocity-proportional below the first node.
    return kUnit * v[0] * std::sqrt(e / 1e3);
  }
  std::size_t i = static_cast<std::size_t>(x);
  if (i >= kNodes - 1) i = kNodes - 2;  // extrapolate along the last segment
  const double f = x - static_cast<double>(i);
  const double lv = std::log(v[i]) * (1 - f) + std::log(v[i + 1]) * f;
  return kUnit * std::exp(lv);
}

}  // namespace siv::stopping::detail
