#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "siv/stopping/material.hpp"

namespace siv::stopping {

enum class ElectronicModel {
  /// Velocity-proportional Lindhard-Scharff stopping, S_e = k_L sqrt(E).
  kLindhardScharff,
  /// SRIM-2013 electronic stopping tables where available for the ion/target
  /// pair (Si in C, Fe, Cr, Ni, Si), Lindhard-Scharff for any other pair.
  kTabulated,
};

struct StoppingModel {
  ElectronicModel electronic = ElectronicModel::kTabulated;
  /// Histories end below this energy.
  double energy_cutoff_ev = 1000.0;
  /// Largest impact parameter sampled in a collision. Unset means the
  /// dense-medium value n^(-1/3) / sqrt(pi) of the current material.
  std::optional<double> max_impact_parameter_nm;
  /// Multiplier applied to the Lindhard-Scharff coefficient.
  double lindhard_correction = 1.0;
  /// Ratio of projected range to path length applied by csda_range. Set so
  /// that csda_range matches the mean stopping depth of the collision
  /// transport for 2.9 MeV Si in diamond.
  double projected_range_factor = 0.9682;

  /// Throws ConfigError on non-positive cutoff, impact parameter or factors.
  void validate() const;
};

/// Lindhard-Scharff coefficient k_L for one ion/target-atom pair in eV^(1/2) nm^2.
double lindhard_coefficient(const IonSpecies& ion, int target_z);

/// Electronic stopping in eV/nm (Bragg additivity over components).
/// Without an explicit model this is pure Lindhard-Scharff, so S_e scales as sqrt(E).
/// Throws DomainError for negative energy.
double electronic_stopping(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                           ElectronicModel model = ElectronicModel::kLindhardScharff,
                           double lindhard_correction = 1.0);

/// ZBL universal nuclear stopping in eV/nm.
double nuclear_stopping(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev);

/// Electronic (per `model`) plus ZBL nuclear stopping, eV/nm.
double total_stopping(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                      const StoppingModel& model = {});

/// Path length from `energy_ev` down to rest, integrating 1/S_total, in nm.
double path_length_range(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                         const StoppingModel& model = {});

/// Projected range in nm: path_length_range times model.projected_range_factor.
/// Strictly increasing in energy, zero at zero energy.
double csda_range(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                  const StoppingModel& model = {});

/// Path length obtainable from electronic stopping alone. Because nuclear
/// losses only shorten a history, this bounds the residual path of any ion.
double electronic_only_range(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                             const StoppingModel& model = {});

struct StoppingRow {
  double energy_ev;
  double electronic_ev_nm;
  double nuclear_ev_nm;
  double range_nm;
};

std::vector<StoppingRow> stopping_table(const IonSpecies& ion, const TargetMaterial& mat,
                                        std::span<const double> energies_ev,
                                        const StoppingModel& model = {});

/// CSV with header `energy_eV,S_e,S_n,range_nm` (stopping in eV/nm).
void write_stopping_csv(std::ostream& os, std::span<const StoppingRow> rows);

namespace detail {
/// SRIM-2013 electronic stopping for ion `ion_z` on element `target_z` at
/// `energy_per_u_ev` (eV/u), in eV nm^2 per atom. Empty if the pair is not tabulated.
std::optional<double> srim_electronic_per_atom(int ion_z, int target_z, double energy_per_u_ev);
}  // namespace detail

}  // namespace siv::stopping
