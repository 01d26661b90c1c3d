#include "siv/stopping/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "siv/errors.hpp"
#include "siv/types.hpp"

namespace siv::stopping {

using constants::kPi;

double zbl_screening(double x) {
  return 0.18175 * std::exp(-3.1998 * x) + 0.50986 * std::exp(-0.94229 * x) +
         0.28022 * std::exp(-0.4029 * x) + 0.028171 * std::exp(-0.20162 * x);
}

double zbl_screening_length_nm(int z1, int z2) {
  return 0.8854 * constants::kBohrRadiusNm / (std::pow(z1, 0.23) + std::pow(z2, 0.23));
}

CollisionPair CollisionPair::make(const IonSpecies& ion, int target_z, double target_mass_u) {
  CollisionPair p{};
  p.screening_length_nm = zbl_screening_length_nm(ion.atomic_number, target_z);
  const double ecm_per_elab = target_mass_u / (ion.mass_u + target_mass_u);
  p.reduced_energy_per_ev = p.screening_length_nm * ecm_per_elab /
                            (ion.atomic_number * target_z * constants::kCoulombEvNm);
  p.mass_ratio = ion.mass_u / target_mass_u;
  const double msum = ion.mass_u + target_mass_u;
  p.transfer_factor = 4.0 * ion.mass_u * target_mass_u / (msum * msum);
  return p;
}

double closest_approach(double eps, double b) {
  // Root of x^2 - x phi(x)/eps - b^2 = 0. Since phi <= 1 the unscreened root
  // bounds it from above; x = b bounds it from below.
  const double hi = 0.5 * (1.0 / eps + std::sqrt(1.0 / (eps * eps) + 4.0 * b * b));
  const double lo = std::max(b, 1e-14);
  auto f = [&](double x) { return x * x - x * zbl_screening(x) / eps - b * b; };
  const double flo = f(lo);
  const double fhi = f(hi);
  if (fhi <= 0) return hi;
  if (flo >= 0) return lo;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

double scattering_angle_quadrature(double eps, double b, int nodes) {
  if (!(eps > 0)) throw DomainError("scattering angle: reduced energy must be positive");
  if (b < 0) throw DomainError("scattering angle: negative impact parameter");
  if (b == 0) return kPi;
  const double x0 = closest_approach(eps, b);
  const double beta = b / x0;
  const int half = nodes / 2;
  double sum = 0;
  for (int j = 1; j <= half; ++j) {
    const double u = std::cos((2 * j - 1) * kPi / (2.0 * nodes));
    const double g = 1.0 - u * zbl_screening(x0 / u) / (x0 * eps) - beta * beta * u * u;
    sum += std::sqrt((1.0 - u * u) / g);
  }
  const double integral = kPi / nodes * sum;
  return std::clamp(kPi - 2.0 * beta * integral, 0.0, kPi);
}

namespace {

struct Node {
  double theta;
  double versine;  // 1 - cos(theta)
};

class AngleTable {
 public:
  static constexpr double kLnEpsMin = -6.907755278982137;  // ln 1e-3
  static constexpr double kLnEpsMax = 9.210340371976184;   // ln 1e4
  static constexpr double kLnEpsStep = 0.05;
  static constexpr double kLnBMin = -9.210340371976184;  // ln 1e-4
  static constexpr double kLnBMax = 3.912023005428146;   // ln 50
  static constexpr double kLnBStep = 0.025;

  AngleTable()
      : n_eps_(static_cast<int>(std::ceil((kLnEpsMax - kLnEpsMin) / kLnEpsStep)) + 1),
        n_b_(static_cast<int>(std::ceil((kLnBMax - kLnBMin) / kLnBStep)) + 1),
        values_(static_cast<std::size_t>(n_eps_) * n_b_) {
    for (int i = 0; i < n_eps_; ++i) {
      const double eps = std::exp(kLnEpsMin + i * kLnEpsStep);
      for (int j = 0; j < n_b_; ++j) {
        const double b = std::exp(kLnBMin + j * kLnBStep);
        const double theta = scattering_angle_quadrature(eps, b);
        const double s = std::sin(0.5 * theta);
        values_[static_cast<std::size_t>(i) * n_b_ + j] = {theta, 2.0 * s * s};
      }
    }
  }

  static const AngleTable& instance() {
    static const AngleTable table;
    return table;
  }

  /// Interpolated angle (Member = &Node::theta) or versine (&Node::versine).
  template <double Node::*Member>
  double lookup(double eps, double b) const {
    auto direct = [&] {
      const double theta = scattering_angle_quadrature(eps, b);
      if constexpr (Member == &Node::theta) return theta;
      const double s = std::sin(0.5 * theta);
      return 2.0 * s * s;
    };
    const double fi = (std::log(eps) - kLnEpsMin) / kLnEpsStep;
    if (fi < 0 || fi >= n_eps_ - 1) return direct();
    const int i = static_cast<int>(fi);
    const double ti = fi - i;
    const double fj = (std::log(b) - kLnBMin) / kLnBStep;
    if (fj < 0 || fj >= n_b_ - 1) return direct();
    const int j = static_cast<int>(fj);
    const double tj = fj - j;
    return (1 - ti) * ((1 - tj) * at(i, j).*Member + tj * at(i, j + 1).*Member) +
           ti * ((1 - tj) * at(i + 1, j).*Member + tj * at(i + 1, j + 1).*Member);
  }

 private:
  const Node& at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_b_ + j]; }

  int n_eps_;
  int n_b_;
  std::vector<Node> values_;
};

}  // namespace

double scattering_angle_cm(double eps, double b) {
  if (!(eps > 0)) throw DomainError("scattering angle: reduced energy must be positive");
  if (b < 0) throw DomainError("scattering angle: negative impact parameter");
  if (b == 0) return kPi;
  return AngleTable::instance().lookup<&Node::theta>(eps, b);
}

namespace detail {
double scattering_versine(double eps, double b) {
  if (b <= 0) return 2.0;
  return AngleTable::instance().lookup<&Node::versine>(eps, b);
}
}  // namespace detail

double zbl_scattering_angle(const IonSpecies& ion, int target_z, double target_mass_u,
                            double energy_ev, double impact_parameter_nm) {
  if (!(energy_ev > 0)) throw DomainError("zbl_scattering_angle: energy must be positive");
  if (impact_parameter_nm < 0) throw DomainError("zbl_scattering_angle: negative impact parameter");
  const auto pair = CollisionPair::make(ion, target_z, target_mass_u);
  return scattering_angle_cm(energy_ev * pair.reduced_energy_per_ev,
                             impact_parameter_nm / pair.screening_length_nm);
}

}  // namespace siv::stopping
