#include "siv/pinhole/simulate.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "siv/errors.hpp"
#include "siv/rng.hpp"
#include "siv/stopping/transport.hpp"

namespace siv::pinhole {

void BeamSpec::validate() const {
  ion.validate();
  if (!(energy_mev > 0)) throw ConfigError("beam energy must be positive");
  if (!(divergence_mrad >= 0)) throw ConfigError("beam divergence must be non-negative");
  if (!(fluence_cm2 >= 0)) throw ConfigError("beam fluence must be non-negative");
  if (lateral_radius_um && !(*lateral_radius_um > 0))
    throw ConfigError("beam lateral radius must be positive");
}

std::vector<std::string> BeamSpec::warnings() const {
  std::vector<std::string> w;
  if (energy_mev < 0.4 || energy_mev > 3.0)
    w.push_back("beam energy outside the supported 0.4-3 MeV range");
  return w;
}

namespace {

struct Arrival {
  Vec3 position_nm;  // lab frame
  Vec3 direction;    // lab frame
  double energy_ev;
  bool scattered;
};

struct ChunkResult {
  std::vector<Arrival> arrivals;
  std::uint64_t stopped = 0;
  std::uint64_t blocked = 0;
};

constexpr std::uint64_t kChunk = 1024;

}  // namespace

double sampling_radius_um(const BeamSpec& beam, const PinholeGeometry& geom,
                          const stopping::StoppingModel& model) {
  beam.validate();
  geom.validate();
  const ConicalWall wall(geom);
  const stopping::Transporter tr(beam.ion, wall, model);
  const double r0 = 0.5 * geom.diameter_um;
  const double sin_a =
      geom.wall_angle_deg == 90.0 ? 1.0 : std::sin(geom.wall_angle_deg * constants::kPi / 180.0);
  return 3.0 * r0 + tr.residual_path_bound(beam.energy_mev * 1e6) / constants::kNmPerUm / sin_a;
}

std::vector<SamplePlaneTally> simulate_pinhole_planes(const BeamSpec& beam,
                                                      const PinholeGeometry& geom,
                                                      std::span<const double> distances_mm,
                                                      std::uint64_t n_histories,
                                                      std::uint64_t seed,
                                                      const SimulationOptions& options) {
  beam.validate();
  geom.validate();
  options.model.validate();
  if (n_histories < 1) throw ConfigError("simulate_pinhole needs at least one history");
  if (distances_mm.empty()) throw ConfigError("simulate_pinhole needs at least one plane");
  for (double d : distances_mm)
    if (!(d > 0)) throw ConfigError("pinhole-sample distance must be positive");

  const double e0 = beam.energy_mev * 1e6;
  const ConicalWall wall(geom);
  const stopping::Transporter tr(beam.ion, wall, options.model, options.transport);
  const Mat3 to_foil = geom.lab_to_foil();
  const Mat3 to_lab = to_foil.transpose();
  const double r_sample = sampling_radius_um(beam, geom, options.model);
  const double r_beam = beam.lateral_radius_um.value_or(r_sample);
  const double sigma = beam.divergence_mrad * 1e-3;

  std::vector<std::string> warnings = beam.warnings();
  if (stopping::csda_range(beam.ion, geom.material, e0, options.model) >=
      geom.foil_thickness_um * constants::kNmPerUm)
    warnings.push_back("wall range at beam energy exceeds the foil thickness; pinhole not opaque");

  auto run_history = [&](std::uint64_t i, ChunkResult& out) {
    auto g = rng::substream(seed, rng::Stage::kPinhole, i);
    const double r = r_beam * std::sqrt(rng::uniform_open(g));
    const double phi = 2.0 * constants::kPi * rng::uniform_open(g);
    // Box-Muller, written out so the stream is the same on every platform.
    const double rad = std::sqrt(-2.0 * std::log(rng::uniform_open(g)));
    const double ang = 2.0 * constants::kPi * rng::uniform_open(g);
    const Vec3 d_lab =
        Vec3(sigma * rad * std::cos(ang), sigma * rad * std::sin(ang), 1.0).normalized();
    if (r > r_sample) {
      ++out.blocked;
      return;
    }
    const Vec3 p_lab(r * std::cos(phi) * constants::kNmPerUm,
                     r * std::sin(phi) * constants::kNmPerUm, 0.0);
    Vec3 p = to_foil * p_lab;
    const Vec3 d = to_foil * d_lab;

    bool hits = false;
    const auto ts = wall.crossings(p, d);
    for (std::size_t k = 0; k + 1 < ts.size() && !hits; ++k)
      hits = wall.material_at(p + 0.5 * (ts[k] + ts[k + 1]) * d) >= 0;
    if (!hits) {
      out.arrivals.push_back({p_lab, d_lab, e0, false});
      return;
    }

    p -= d * ((p.z() + 1.0) / d.z());  // back off to 1 nm upstream of the foil
    const auto rec = tr.run({p, d, e0}, g);
    if (rec.status == stopping::TerminalStatus::kStoppedInMaterial) {
      ++out.stopped;
      return;
    }
    const Vec3 pe = to_lab * rec.final_state.position_nm;
    const Vec3 de = to_lab * rec.final_state.direction;
    if (de.z() <= 0) {
      ++out.stopped;
      return;
    }
    out.arrivals.push_back({pe, de, rec.final_state.energy_ev, rec.entered_material});
  };

  const std::uint64_t n_chunks = (n_histories + kChunk - 1) / kChunk;
  std::vector<ChunkResult> chunks(n_chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c; (c = next.fetch_add(1)) < n_chunks;) {
      const std::uint64_t end = std::min(n_histories, (c + 1) * kChunk);
      for (std::uint64_t i = c * kChunk; i < end; ++i) run_history(i, chunks[c]);
    }
  };
  unsigned n_threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_chunks)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  const double z_back = (to_lab * Vec3(0, 0, geom.foil_thickness_um * constants::kNmPerUm)).z();
  std::vector<SamplePlaneTally> tallies;
  for (double dist : distances_mm) {
    SamplePlaneTally t(dist, options.binning);
    t.warnings = warnings;
    const double z_plane = z_back + dist * 1e6;
    for (const auto& c : chunks) {
      for (const auto& a : c.arrivals) {
        const double s = (z_plane - a.position_nm.z()) / a.direction.z();
        const Vec3 hit = a.position_nm + s * a.direction;
        const double x = hit.x() / constants::kNmPerUm, y = hit.y() / constants::kNmPerUm;
        if (a.scattered) t.add_scattered(x, y, a.energy_ev);
        else t.add_direct(x, y, a.energy_ev);
      }
      t.add_stopped(c.stopped);
      t.add_blocked(c.blocked);
    }
    tallies.push_back(std::move(t));
  }
  return tallies;
}

SamplePlaneTally simulate_pinhole(const BeamSpec& beam, const PinholeGeometry& geom,
                                  double distance_mm, std::uint64_t n_histories,
                                  std::uint64_t seed, const SimulationOptions& options) {
  const double d[] = {distance_mm};
  return std::move(simulate_pinhole_planes(beam, geom, d, n_histories, seed, options).front());
}

}  // namespace siv::pinhole
