#include "siv/stopping/transport.hpp"

#include <algorithm>
#include <cmath>

#include "siv/errors.hpp"
#include "siv/stopping/scattering.hpp"

namespace siv::stopping {

namespace {

constexpr double kNudgeNm = 1e-6;
constexpr int kTableNodes = 8192;
constexpr double kTableMaxEnergyEv = 25e6;
constexpr std::size_t kMaxBoundaryCrossings = 1'000'000;

// Rotate unit vector `d` by polar angle (cos_t, sin_t) and azimuth (cp, sp).
Vec3 deflect(const Vec3& d, double cos_t, double sin_t, double cp, double sp) {
  const double w = d.z();
  if (std::abs(w) > 1.0 - 1e-10) {
    const double sgn = w > 0 ? 1.0 : -1.0;
    return {sin_t * cp, sin_t * sp, sgn * cos_t};
  }
  const double s = std::sqrt(1.0 - w * w);
  const double ux = d.x(), uy = d.y();
  Vec3 out{ux * cos_t + sin_t * (ux * w * cp - uy * sp) / s,
           uy * cos_t + sin_t * (uy * w * cp + ux * sp) / s, w * cos_t - s * sin_t * cp};
  return out.normalized();
}

}  // namespace

struct Transporter::MaterialTables {
  struct Partner {
    CollisionPair pair;
    double cumulative_fraction;
  };
  std::vector<Partner> partners;
  double flight_nm;
  double p_max_nm;
  double du;
  std::vector<double> se;           // S_e at u = k du
  std::vector<double> path_bound;   // total-stopping path from u = k du
  double critical_angle_sq_times_e; // psi_c^2 * E, eV
  const TargetMaterial* material;

  double interp(const std::vector<double>& t, double u) const {
    const double x = u / du;
    const auto k = static_cast<std::size_t>(x);
    if (k + 1 >= t.size()) return t.back();
    const double f = x - static_cast<double>(k);
    return t[k] + f * (t[k + 1] - t[k]);
  }
};

Transporter::Transporter(IonSpecies ion, const Geometry& geometry, StoppingModel model,
                         TransportOptions options)
    : ion_(ion), geometry_(&geometry), model_(model), options_(options) {
  ion_.validate();
  model_.validate();
  if (!(options_.range_termination_margin > 0))
    throw ConfigError("range termination margin must be positive");
  for (const auto& mat : geometry.materials()) {
    auto t = std::make_unique<MaterialTables>();
    t->material = &mat;
    double cum = 0;
    double zbar = 0;
    for (const auto& c : mat.components()) {
      cum += c.fraction;
      zbar += c.fraction * c.atomic_number;
      t->partners.push_back({CollisionPair::make(ion_, c.atomic_number, c.mass_u), cum});
    }
    t->partners.back().cumulative_fraction = 1.0;
    t->flight_nm = mat.mean_spacing_nm();
    t->p_max_nm = model_.max_impact_parameter_nm.value_or(t->flight_nm / std::sqrt(constants::kPi));

    const double u_max = std::sqrt(kTableMaxEnergyEv);
    t->du = u_max / (kTableNodes - 1);
    t->se.resize(kTableNodes);
    t->path_bound.resize(kTableNodes);
    std::vector<double> stot(kTableNodes);
    for (int k = 0; k < kTableNodes; ++k) {
      const double u = k * t->du;
      t->se[k] = electronic_stopping(ion_, mat, u * u, model_.electronic, model_.lindhard_correction);
      stot[k] = t->se[k] + nuclear_stopping(ion_, mat, u * u);
    }
    // Residual path dE/S with E = u^2; node 0 takes the node-1 value.
    auto integrand = [&](int k) {
      if (k == 0) return 2.0 * t->du / stot[1];
      return 2.0 * k * t->du / stot[k];
    };
    t->path_bound[0] = 0;
    for (int k = 1; k < kTableNodes; ++k)
      t->path_bound[k] = t->path_bound[k - 1] + 0.5 * t->du * (integrand(k - 1) + integrand(k));

    const double a = zbl_screening_length_nm(ion_.atomic_number, static_cast<int>(std::lround(zbar)));
    t->critical_angle_sq_times_e = 2.0 * constants::kPi * ion_.atomic_number * zbar *
                                   constants::kCoulombEvNm * a *
                                   std::pow(mat.atomic_density_nm3(), 2.0 / 3.0);
    tables_.push_back(std::move(t));
  }
}

Transporter::~Transporter() = default;
Transporter::Transporter(Transporter&&) noexcept = default;
Transporter& Transporter::operator=(Transporter&&) noexcept = default;

double Transporter::stopping_lookup(int material, double energy_ev) const {
  const auto& t = *tables_.at(static_cast<std::size_t>(material));
  if (energy_ev >= kTableMaxEnergyEv)
    return electronic_stopping(ion_, *t.material, energy_ev, model_.electronic,
                               model_.lindhard_correction);
  return t.interp(t.se, std::sqrt(std::max(energy_ev, 0.0)));
}

double Transporter::residual_path_bound(double energy_ev) const {
  if (energy_ev >= kTableMaxEnergyEv) return kNoBoundary;
  // Longest over all materials, since the ion may cross into any of them.
  double bound = 0;
  for (const auto& t : tables_)
    bound = std::max(bound, options_.range_termination_margin *
                                    t->interp(t->path_bound, std::sqrt(energy_ev)) +
                                t->flight_nm);
  return bound;
}

TrajectoryRecord Transporter::run(const IonState& start, rng::Engine& rng) const {
  if (!(start.energy_ev > model_.energy_cutoff_ev))
    throw DomainError("transport: start energy must exceed the cutoff");
  if (!start.position_nm.allFinite() || !start.direction.allFinite())
    throw DomainError("transport: non-finite start state");

  TrajectoryRecord rec;
  Vec3 pos = start.position_nm;
  Vec3 dir = start.direction.normalized();
  double energy = start.energy_ev;
  const bool record = options_.record_path;
  auto push = [&] {
    if (record) rec.points.push_back({pos, energy});
  };
  auto finish = [&](TerminalStatus status) {
    rec.status = status;
    rec.final_state = {pos, dir, energy};
    push();
    return rec;
  };
  push();

  const Geometry& geo = *geometry_;
  int region = geo.material_at(pos);
  std::size_t crossings = 0;

  while (true) {
    if (region < 0) {
      const double t = geo.distance_to_boundary(pos, dir);
      if (!std::isfinite(t)) return finish(TerminalStatus::kExited);
      if (++crossings > kMaxBoundaryCrossings)
        throw Error("transport: boundary crossing limit exceeded");
      pos += t * dir;
      const int next = geo.material_at(pos + kNudgeNm * dir);
      if (next >= 0 && options_.grazing_reflection) {
        const Vec3 n = geo.surface_normal(pos);
        const double sin_inc = -dir.dot(n);
        const double psi_sq = tables_[static_cast<std::size_t>(next)]->critical_angle_sq_times_e / energy;
        if (sin_inc > 0 && sin_inc * sin_inc < psi_sq) {
          dir = (dir + 2.0 * sin_inc * n).normalized();
          ++rec.surface_reflections;
          push();
          pos += kNudgeNm * dir;
          continue;
        }
      }
      pos += kNudgeNm * dir;
      region = next;
      if (region >= 0) rec.entered_material = true;
      push();
      continue;
    }

    const auto& mt = *tables_[static_cast<std::size_t>(region)];
    const double to_boundary = geo.safety_distance(pos) > mt.flight_nm
                                   ? kNoBoundary
                                   : geo.distance_to_boundary(pos, dir);
    const bool hits_boundary = to_boundary <= mt.flight_nm;
    const double step = hits_boundary ? to_boundary : mt.flight_nm;

    energy -= stopping_lookup(region, energy) * step;
    pos += step * dir;
    if (energy < model_.energy_cutoff_ev) {
      energy = std::max(energy, 0.0);
      return finish(TerminalStatus::kStoppedInMaterial);
    }

    if (hits_boundary) {
      if (++crossings > kMaxBoundaryCrossings)
        throw Error("transport: boundary crossing limit exceeded");
      pos += kNudgeNm * dir;
      region = geo.material_at(pos);
      push();
      continue;
    }

    const MaterialTables::Partner* partner = &mt.partners.front();
    if (mt.partners.size() > 1) {
      const double r = rng::uniform_open(rng);
      for (const auto& p : mt.partners) {
        partner = &p;
        if (r <= p.cumulative_fraction) break;
      }
    }
    const auto& pair = partner->pair;
    const double p = mt.p_max_nm * std::sqrt(rng::uniform_open(rng));
    // Azimuth from a point in the unit disk; both coordinates come from the
    // two 32-bit halves of one draw.
    double ux, uy, s2;
    do {
      const std::uint64_t bits = rng();
      ux = (static_cast<double>(bits >> 32) + 0.5) * 0x1.0p-31 - 1.0;
      uy = (static_cast<double>(bits & 0xffffffffu) + 0.5) * 0x1.0p-31 - 1.0;
      s2 = ux * ux + uy * uy;
    } while (s2 > 1.0);
    const double cos_phi = (ux * ux - uy * uy) / s2;
    const double sin_phi = 2.0 * ux * uy / s2;
    const double v = detail::scattering_versine(energy * pair.reduced_energy_per_ev,
                                                p / pair.screening_length_nm);
    const double ct = 1.0 - v;
    const double st = std::sqrt(std::max(0.0, v * (2.0 - v)));
    energy -= pair.transfer_factor * energy * 0.5 * v;
    const double den = std::sqrt(1.0 + 2.0 * pair.mass_ratio * ct + pair.mass_ratio * pair.mass_ratio);
    dir = deflect(dir, (ct + pair.mass_ratio) / den, st / den, cos_phi, sin_phi);
    ++rec.collisions;
    push();
    if (energy < model_.energy_cutoff_ev) return finish(TerminalStatus::kStoppedInMaterial);

    if (options_.range_termination) {
      const double esc = geo.escape_distance(pos);
      if (esc > 0 && esc > residual_path_bound(energy)) {
        rec.range_terminated = true;
        return finish(TerminalStatus::kStoppedInMaterial);
      }
    }
  }
}

TrajectoryRecord transport_ion(const IonSpecies& ion, const Geometry& geometry,
                               const IonState& start, const StoppingModel& model,
                               rng::Engine& rng, TransportOptions options) {
  return Transporter(ion, geometry, model, options).run(start, rng);
}

}  // namespace siv::stopping
