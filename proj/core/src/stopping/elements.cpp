#include "siv/stopping/elements.hpp"

#include <array>
#include <string>

#include "siv/errors.hpp"

namespace siv::stopping {
namespace {

constexpr std::array<Element, 36> kElements = {{
    {1, "H", 1.008},     {2, "He", 4.0026},   {3, "Li", 6.94},
    {4, "Be", 9.0122},   {5, "B", 10.81},     {6, "C", 12.011},
    {7, "N", 14.007},    {8, "O", 15.999},    {9, "F", 18.998},
    {10, "Ne", 20.180},  {11, "Na", 22.990},  {12, "Mg", 24.305},
    {13, "Al", 26.982},  {14, "Si", 28.085},  {15, "P", 30.974},
    {16, "S", 32.06},    {17, "Cl", 35.45},   {18, "Ar", 39.948},
    {19, "K", 39.098},   {20, "Ca", 40.078},  {21, "Sc", 44.956},
    {22, "Ti", 47.867},  {23, "V", 50.942},   {24, "Cr", 51.996},
    {25, "Mn", 54.938},  {26, "Fe", 55.845},  {27, "Co", 58.933},
    {28, "Ni", 58.693},  {29, "Cu", 63.546},  {30, "Zn", 65.38},
    {31, "Ga", 69.723},  {32, "Ge", 72.630},  {42, "Mo", 95.95},
    {47, "Ag", 107.87},  {50, "Sn", 118.71},  {79, "Au", 196.97},
}};

}  // namespace

const Element& element_by_symbol(std::string_view symbol) {
  for (const auto& e : kElements)
    if (e.symbol == symbol) return e;
  throw ConfigError("unknown element symbol '" + std::string(symbol) + "'");
}

const Element& element_by_z(int z) {
  for (const auto& e : kElements)
    if (e.z == z) return e;
  throw ConfigError("unsupported element Z=" + std::to_string(z));
}

}  // namespace siv::stopping
