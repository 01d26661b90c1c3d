#pragma once

#include "siv/stopping/material.hpp"

namespace siv::stopping {

/// ZBL universal screening function (four-exponential form).
double zbl_screening(double x);

/// ZBL universal screening length 0.8854 a0 / (Z1^0.23 + Z2^0.23), nm.
double zbl_screening_length_nm(int z1, int z2);

/// Constants of one ion / target-atom collision pair.
struct CollisionPair {
  double screening_length_nm;
  /// Reduced energy per eV of laboratory ion energy.
  double reduced_energy_per_ev;
  /// M1 / M2.
  double mass_ratio;
  /// Maximum fractional energy transfer 4 M1 M2 / (M1 + M2)^2.
  double transfer_factor;

  static CollisionPair make(const IonSpecies& ion, int target_z, double target_mass_u);
};

/// Reduced distance of closest approach for reduced energy `eps` and reduced
/// impact parameter `b` under ZBL screening.
double closest_approach(double eps, double b);

/// Centre-of-mass deflection angle by Gauss-Mehler quadrature of the classical
/// scattering integral with `nodes` Chebyshev nodes (even). No caching.
double scattering_angle_quadrature(double eps, double b, int nodes = 64);

/// Centre-of-mass deflection angle, bilinear in (ln eps, ln b) over a table
/// built once from scattering_angle_quadrature. Points outside the table fall
/// back to direct quadrature.
double scattering_angle_cm(double eps, double b);

/// Centre-of-mass deflection angle in [0, pi] for an ion of laboratory energy
/// `energy_ev` hitting an atom (Z, M) at impact parameter `impact_parameter_nm`.
double zbl_scattering_angle(const IonSpecies& ion, int target_z, double target_mass_u,
                            double energy_ev, double impact_parameter_nm);

namespace detail {
/// 1 - cos(theta) for the centre-of-mass angle, interpolated from the same
/// table as scattering_angle_cm. Used by the transport stepping loop.
double scattering_versine(double eps, double b);
}  // namespace detail

}  // namespace siv::stopping
