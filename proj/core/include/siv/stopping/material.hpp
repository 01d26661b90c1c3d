#pragma once

#include <string>
#include <vector>

namespace siv::stopping {

struct IonSpecies {
  int atomic_number = 14;
  double mass_u = 28.0;

  /// Throws ConfigError unless Z >= 1 and mass > 0.
  void validate() const;

  static IonSpecies silicon() { return {14, 28.0}; }
};

struct MaterialComponent {
  int atomic_number;
  double mass_u;
  double fraction;  // stoichiometric (atom) fraction
};

/// Amorphous target. Composition and density are validated on construction;
/// the atomic density is derived from them.
class TargetMaterial {
 public:
  TargetMaterial(std::string name, std::vector<MaterialComponent> components,
                 double mass_density_g_cm3);

  const std::string& name() const noexcept { return name_; }
  const std::vector<MaterialComponent>& components() const noexcept { return components_; }
  double mass_density_g_cm3() const noexcept { return mass_density_; }
  /// atoms / cm^3
  double atomic_density_cm3() const noexcept { return atomic_density_; }
  /// atoms / nm^3
  double atomic_density_nm3() const noexcept { return atomic_density_ * 1e-21; }
  /// Mean interatomic spacing n^(-1/3) in nm.
  double mean_spacing_nm() const;
  double mean_atomic_mass_u() const;
  double mean_atomic_number() const;

  /// Pure carbon, 3.52 g/cm^3.
  static TargetMaterial diamond();
  /// Pinhole steel, modeled as pure Fe at 7.87 g/cm^3.
  static TargetMaterial steel();
  /// Single-element material from a symbol, e.g. ("Fe", 7.87).
  static TargetMaterial element(const std::string& symbol, double mass_density_g_cm3);

 private:
  std::string name_;
  std::vector<MaterialComponent> components_;
  double mass_density_;
  double atomic_density_;
};

}  // namespace siv::stopping
