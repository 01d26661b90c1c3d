#include "siv/stopping/material.hpp"

#include <cmath>
#include <string>

#include "siv/errors.hpp"
#include "siv/stopping/elements.hpp"
#include "siv/types.hpp"

namespace siv::stopping {

void IonSpecies::validate() const {
  if (atomic_number < 1) throw ConfigError("ion atomic number must be >= 1");
  if (!(mass_u > 0)) throw ConfigError("ion mass must be positive");
}

TargetMaterial::TargetMaterial(std::string name, std::vector<MaterialComponent> components,
                               double mass_density_g_cm3)
    : name_(std::move(name)), components_(std::move(components)), mass_density_(mass_density_g_cm3) {
  if (components_.empty()) throw ConfigError("material '" + name_ + "' has no components");
  if (!(mass_density_ > 0))
    throw ConfigError("material '" + name_ + "' must have positive mass density");
  double sum = 0;
  double mean_mass = 0;
  for (const auto& c : components_) {
    element_by_z(c.atomic_number);  // rejects unsupported elements
    if (!(c.mass_u > 0)) throw ConfigError("component mass must be positive");
    if (!(c.fraction > 0)) throw ConfigError("component fraction must be positive");
    sum += c.fraction;
    mean_mass += c.fraction * c.mass_u;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("material '" + name_ + "' fractions sum to " + std::to_string(sum) +
                      ", expected 1");
  atomic_density_ = mass_density_ * constants::kAvogadro / mean_mass;
}

double TargetMaterial::mean_spacing_nm() const { return std::cbrt(1.0 / atomic_density_nm3()); }

double TargetMaterial::mean_atomic_mass_u() const {
  double m = 0;
  for (const auto& c : components_) m += c.fraction * c.mass_u;
  return m;
}

double TargetMaterial::mean_atomic_number() const {
  double z = 0;
  for (const auto& c : components_) z += c.fraction * c.atomic_number;
  return z;
}

TargetMaterial TargetMaterial::diamond() { return element("C", 3.52); }

TargetMaterial TargetMaterial::steel() {
  auto m = element("Fe", 7.87);
  m.name_ = "steel";
  return m;
}

TargetMaterial TargetMaterial::element(const std::string& symbol, double mass_density_g_cm3) {
  const auto& e = element_by_symbol(symbol);
  return TargetMaterial(std::string(e.symbol), {{e.z, e.mass_u, 1.0}}, mass_density_g_cm3);
}

}  // namespace siv::stopping
