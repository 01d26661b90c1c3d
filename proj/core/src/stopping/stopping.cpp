#include "siv/stopping/stopping.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "siv/errors.hpp"
#include "siv/types.hpp"

namespace siv::stopping {

void StoppingModel::validate() const {
  if (!(energy_cutoff_ev > 0)) throw ConfigError("energy cutoff must be positive");
  if (max_impact_parameter_nm && !(*max_impact_parameter_nm > 0))
    throw ConfigError("max impact parameter must be positive");
  if (!(lindhard_correction > 0)) throw ConfigError("lindhard_correction must be positive");
  if (!(projected_range_factor > 0 && projected_range_factor <= 1))
    throw ConfigError("projected_range_factor must be in (0, 1]");
}

double lindhard_coefficient(const IonSpecies& ion, int target_z) {
  const double z1 = ion.atomic_number;
  const double z2 = target_z;
  const double denom = std::pow(std::pow(z1, 2.0 / 3.0) + std::pow(z2, 2.0 / 3.0), 1.5) *
                       std::sqrt(ion.mass_u);
  // 1.212 eV^(1/2) A^2; 1 A^2 = 1e-2 nm^2.
  return 1.212 * std::pow(z1, 7.0 / 6.0) * z2 / denom * 1e-2;
}

double electronic_stopping(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                           ElectronicModel model, double lindhard_correction) {
  if (energy_ev < 0) throw DomainError("electronic_stopping: negative energy");
  double per_atom = 0;  // eV nm^2, weighted by stoichiometry
  for (const auto& c : mat.components()) {
    double s = 0;
    bool done = false;
    if (model == ElectronicModel::kTabulated) {
      if (auto t = detail::srim_electronic_per_atom(ion.atomic_number, c.atomic_number,
                                                    energy_ev / ion.mass_u)) {
        s = *t;
        done = true;
      }
    }
    if (!done)
      s = lindhard_correction * lindhard_coefficient(ion, c.atomic_number) * std::sqrt(energy_ev);
    per_atom += c.fraction * s;
  }
  return per_atom * mat.atomic_density_nm3();
}

namespace {

double zbl_reduced_nuclear(double eps) {
  if (eps > 30.0) return std::log(eps) / (2.0 * eps);
  return std::log(1.0 + 1.1383 * eps) /
         (2.0 * (eps + 0.01321 * std::pow(eps, 0.21226) + 0.19593 * std::sqrt(eps)));
}

}  // namespace

double nuclear_stopping(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev) {
  if (energy_ev < 0) throw DomainError("nuclear_stopping: negative energy");
  if (energy_ev == 0) return 0;
  const double z1 = ion.atomic_number;
  const double m1 = ion.mass_u;
  double per_atom = 0;  // eV cm^2
  for (const auto& c : mat.components()) {
    const double z2 = c.atomic_number;
    const double m2 = c.mass_u;
    const double zsum = std::pow(z1, 0.23) + std::pow(z2, 0.23);
    const double eps = 32.53 * m2 * (energy_ev * 1e-3) / (z1 * z2 * (m1 + m2) * zsum);
    const double sn = 8.462e-15 * z1 * z2 * m1 * zbl_reduced_nuclear(eps) / ((m1 + m2) * zsum);
    per_atom += c.fraction * sn;
  }
  // eV cm^2 * atoms/cm^3 = eV/cm
  return per_atom * mat.atomic_density_cm3() / constants::kNmPerCm;
}

double total_stopping(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                      const StoppingModel& model) {
  return electronic_stopping(ion, mat, energy_ev, model.electronic, model.lindhard_correction) +
         nuclear_stopping(ion, mat, energy_ev);
}

namespace {

template <class F>
double integrate_inverse_stopping(double energy_ev, F stopping) {
  if (energy_ev < 0) throw DomainError("range: negative energy");
  if (energy_ev == 0) return 0;
  // E = u^2 removes the 1/sqrt(E) singularity of velocity-proportional stopping.
  auto integrand = [&](double u) {
    if (u <= 0) {
      const double u0 = 1e-6 * std::sqrt(energy_ev);
      return 2.0 * u0 / stopping(u0 * u0);
    }
    return 2.0 * u / stopping(u * u);
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::sqrt(energy_ev), 15, 1e-11);
}

}  // namespace

double path_length_range(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                         const StoppingModel& model) {
  model.validate();
  return integrate_inverse_stopping(
      energy_ev, [&](double e) { return total_stopping(ion, mat, e, model); });
}

double csda_range(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                  const StoppingModel& model) {
  return model.projected_range_factor * path_length_range(ion, mat, energy_ev, model);
}

double electronic_only_range(const IonSpecies& ion, const TargetMaterial& mat, double energy_ev,
                             const StoppingModel& model) {
  return integrate_inverse_stopping(energy_ev, [&](double e) {
    return electronic_stopping(ion, mat, e, model.electronic, model.lindhard_correction);
  });
}

std::vector<StoppingRow> stopping_table(const IonSpecies& ion, const TargetMaterial& mat,
                                        std::span<const double> energies_ev,
                                        const StoppingModel& model) {
  std::vector<StoppingRow> rows;
  rows.reserve(energies_ev.size());
  for (double e : energies_ev) {
    rows.push_back({e, electronic_stopping(ion, mat, e, model.electronic, model.lindhard_correction),
                    nuclear_stopping(ion, mat, e), csda_range(ion, mat, e, model)});
  }
  return rows;
}

void write_stopping_csv(std::ostream& os, std::span<const StoppingRow> rows) {
  os << "energy_eV,S_e,S_n,range_nm\n";
  const auto old = os.precision(10);
  for (const auto& r : rows)
    os << r.energy_ev << ',' << r.electronic_ev_nm << ',' << r.nuclear_ev_nm << ',' << r.range_nm
       << '\n';
  os.precision(old);
}

}  // namespace siv::stopping
