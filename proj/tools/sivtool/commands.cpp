#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "siv/analysis/fits.hpp"
#include "siv/analysis/io.hpp"
#include "siv/analysis/spots.hpp"
#include "siv/analysis/yield_curve.hpp"
#include "siv/config.hpp"
#include "siv/emitters/io.hpp"
#include "siv/errors.hpp"
#include "siv/optics/io.hpp"
#include "siv/pinhole/io.hpp"
#include "siv/rng.hpp"
#include "siv/stopping/io.hpp"

namespace sivtool {

namespace fs = std::filesystem;
using siv::config::Json;

namespace {

struct Run {
  Json cfg;
  std::string hash;
  std::uint64_t seed = 0;
};

Json section(const Json& cfg, const char* key) {
  return cfg.contains(key) ? cfg.at(key) : Json::object();
}

Json load_config(const Common& c) {
  Json cfg = Json::object();
  if (!c.config_path.empty()) {
    if (!fs::exists(c.config_path)) throw UsageError("config file not found: " + c.config_path);
    cfg = siv::config::load_file(c.config_path);
  }
  if (!cfg.is_object()) throw siv::ConfigError("config root must be an object");
  siv::config::check_unit_suffixes(cfg, "config");
  return cfg;
}

/// Hash over the effective configuration, the subcommand and its inputs.
Run finish(Json cfg, const char* command, const Common& c, bool needs_seed, Json inputs = Json::object()) {
  if (needs_seed && !c.seed) throw UsageError(std::string(command) + " requires --seed");
  Run r;
  r.seed = c.seed.value_or(0);
  r.cfg = std::move(cfg);
  r.hash = siv::config::hash_hex({{"command", command}, {"config", r.cfg}, {"inputs", inputs}, {"seed", r.seed}});
  fs::create_directories(c.out_dir);
  return r;
}

void surface(const std::vector<std::string>& warnings, bool strict) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (strict && !warnings.empty()) throw EscalatedWarning("warnings escalated by --strict");
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw siv::ConfigError("cannot write " + p.string());
  os << std::setprecision(12);
  return os;
}

std::ofstream open_csv(const fs::path& p, const Run& r, const char* producer) {
  auto os = open_out(p);
  siv::config::write_provenance(os, r.hash, r.seed, producer);
  return os;
}

void write_json(const fs::path& p, Json j, const Run& r) {
  j["config_hash"] = r.hash;
  j["seed"] = r.seed;
  auto os = open_out(p);
  os << j.dump(2) << '\n';
}

Json read_json(const fs::path& p, const char* producer) {
  if (!fs::exists(p))
    throw UsageError("missing input " + p.string() + " (produce it with `sivtool " + producer + "`)");
  return siv::config::load_file(p);
}

std::string distance_tag(double d) {
  std::ostringstream os;
  os << d << "mm";
  return os.str();
}

siv::pinhole::SimulationOptions simulation_options(const Json& cfg, unsigned threads) {
  siv::pinhole::SimulationOptions o;
  if (cfg.contains("model")) o.model = siv::stopping::stopping_model_from_json(cfg.at("model"));
  const Json t = section(cfg, "transport");
  o.transport.grazing_reflection = t.value("grazing_reflection", o.transport.grazing_reflection);
  o.transport.range_termination = t.value("range_termination", o.transport.range_termination);
  o.transport.range_termination_margin =
      siv::config::number_or(t, "range_termination_margin", o.transport.range_termination_margin);
  const Json b = section(cfg, "tally");
  o.binning.direct_bin_nm = siv::config::number_or(b, "direct_bin_nm", o.binning.direct_bin_nm);
  o.binning.direct_half_width_um = siv::config::number_or(b, "direct_half_width_um", o.binning.direct_half_width_um);
  o.binning.radial_bin_um = siv::config::number_or(b, "radial_bin_um", o.binning.radial_bin_um);
  o.binning.radial_max_um = siv::config::number_or(b, "radial_max_um", o.binning.radial_max_um);
  o.threads = threads;
  return o;
}

}  // namespace

int cmd_plan(const PlanArgs& a) {
  Json cfg = load_config(a.common);
  Json session = section(cfg, "session");
  if (!a.preset.empty()) session["preset"] = a.preset;
  if (a.rows) session["rows"] = *a.rows;
  if (a.columns) session["columns"] = *a.columns;
  if ((a.rows && *a.rows < 1) || (a.columns && *a.columns < 1))
    throw UsageError("--rows and --columns must be at least 1");
  if (!session.contains("preset") && !session.contains("fluences_cm2"))
    throw UsageError("plan needs --preset or a session section with fluences_cm2");
  cfg["session"] = session;
  const Run run = finish(cfg, "plan", a.common, false);

  const auto spec = siv::emitters::session_from_json(session);
  const auto yield = siv::emitters::yield_model_from_json(section(cfg, "yield"));
  const Json planning = section(cfg, "planning");
  siv::emitters::PlanOptions po;
  po.spot_area_cm2 = siv::config::number_or(planning, "spot_area_cm2", po.spot_area_cm2);
  po.throughput_correction = siv::config::number_or(planning, "throughput_correction", po.throughput_correction);
  const auto plan = siv::emitters::plan_session(spec, yield, po);
  surface(plan.warnings, a.common.strict);

  auto csv = open_csv(a.common.out_dir / "plan.csv", run, "sivtool plan");
  siv::emitters::write_plan_csv(csv, plan);
  write_json(a.common.out_dir / "plan.json", siv::emitters::plan_to_json(plan), run);
  std::cout << "planned " << plan.spots.size() << " spots";
  if (!plan.markers.empty()) std::cout << " and " << plan.markers.size() << " markers";
  std::cout << " for session " << plan.label << " at " << plan.energy_mev << " MeV\n";
  return kOk;
}

int cmd_transport(const TransportArgs& a) {
  if (!a.histories) throw UsageError("transport requires --histories");
  if (*a.histories == 0) throw UsageError("--histories must be positive");
  Json cfg = load_config(a.common);
  Json beam_j = section(cfg, "beam");
  Json geom_j = section(cfg, "geometry");
  if (a.energy_mev) beam_j["energy_mev"] = *a.energy_mev;
  if (a.wall_angle_deg) geom_j["wall_angle_deg"] = *a.wall_angle_deg;
  cfg["beam"] = beam_j;
  cfg["geometry"] = geom_j;
  std::vector<double> distances = a.distances_mm;
  if (distances.empty()) distances = section(cfg, "tally").value("distances_mm", std::vector<double>{1.0});
  for (double d : distances)
    if (!(d > 0)) throw UsageError("--distance-mm values must be positive");
  cfg["tally"]["distances_mm"] = distances;
  const Json inputs = {{"histories", *a.histories},
                       {"sweep_angles_deg", a.sweep_angles_deg},
                       {"sweep_energies_mev", a.sweep_energies_mev}};
  const Run run = finish(cfg, "transport", a.common, true, inputs);

  const auto beam = siv::pinhole::beam_from_json(beam_j);
  const auto geom = siv::pinhole::geometry_from_json(geom_j);
  const auto opts = simulation_options(cfg, a.threads);
  surface(beam.warnings(), a.common.strict);

  const double profile_bin = siv::config::number_or(section(cfg, "tally"), "profile_bin_um", 10.0);
  const auto tallies =
      siv::pinhole::simulate_pinhole_planes(beam, geom, distances, *a.histories, run.seed, opts);
  Json summary = {{"energy_mev", beam.energy_mev}, {"wall_angle_deg", geom.wall_angle_deg},
                  {"histories", *a.histories}, {"planes", Json::array()}};
  for (const auto& t : tallies) {
    surface(t.warnings, a.common.strict);
    const std::string tag = distance_tag(t.distance_mm());
    {
      auto os = open_out(a.common.out_dir / ("tally_" + tag + ".txt"));
      siv::pinhole::save_tally(os, t, {{"energy_mev", beam.energy_mev}, {"config_hash", run.hash}, {"seed", run.seed}});
    }
    auto rad = open_csv(a.common.out_dir / ("radial_" + tag + ".csv"), run, "sivtool transport");
    if (t.direct > 0 || t.scattered == 0)
      siv::pinhole::write_radial_profile_csv(rad, siv::pinhole::radial_density_profile(t, profile_bin));
    auto dir = open_csv(a.common.out_dir / ("direct_" + tag + ".csv"), run, "sivtool transport");
    siv::pinhole::write_direct_histogram_csv(dir, t);
    summary["planes"].push_back(siv::pinhole::tally_summary_json(t));
    std::cout << tag << ": direct " << t.direct << ", scattered " << t.scattered << ", stopped "
              << t.stopped_in_wall << ", blocked " << t.blocked << '\n';
  }

  if (!a.sweep_angles_deg.empty()) {
    std::vector<double> energies = a.sweep_energies_mev;
    if (energies.empty()) energies = {beam.energy_mev};
    auto os = open_csv(a.common.out_dir / "sweep.csv", run, "sivtool transport");
    os << "wall_angle_deg,energy_mev,launched,direct,scattered,ratio,ratio_sigma\n";
    std::uint64_t index = 1;
    for (double e : energies) {
      for (double ang : a.sweep_angles_deg) {
        auto b = beam;
        b.energy_mev = e;
        auto g = geom;
        g.wall_angle_deg = ang;
        const auto t = siv::pinhole::simulate_pinhole(b, g, distances.front(), *a.histories,
                                                      siv::rng::mix64(run.seed + index++), opts);
        surface(t.warnings, a.common.strict);
        os << ang << ',' << e << ',' << t.launched << ',' << t.direct << ',' << t.scattered << ',';
        if (t.direct > 0) {
          const double r = siv::pinhole::scattered_to_direct_ratio(t);
          const double s = t.scattered > 0
                               ? r * std::sqrt(1.0 / static_cast<double>(t.scattered) + 1.0 / static_cast<double>(t.direct))
                               : 0.0;
          os << r << ',' << s;
        } else {
          os << ',';
        }
        os << '\n';
      }
    }
  }
  write_json(a.common.out_dir / "transport.json", summary, run);
  return kOk;
}

int cmd_synth(const SynthArgs& a) {
  Json cfg = load_config(a.common);
  const Json plan_j = read_json(a.plan, "plan");
  Json inputs = {{"plan_hash", siv::config::hash_hex(plan_j)}, {"region_um", a.region_um}};
  Json tally_header;
  std::optional<siv::pinhole::SamplePlaneTally> tally;
  if (!a.tally.empty()) {
    if (!fs::exists(a.tally))
      throw UsageError("missing input " + a.tally.string() + " (produce it with `sivtool transport`)");
    std::ifstream is(a.tally);
    tally_header = siv::pinhole::read_tally_header(is);
    is.seekg(0);
    tally = siv::pinhole::load_tally(is);
    inputs["tally_hash"] = tally_header.value("config_hash", std::string());
    inputs["tally_seed"] = tally_header.value("seed", std::uint64_t{0});
  }
  if (a.hbt_emitters) inputs["hbt_emitters"] = *a.hbt_emitters;
  const Run run = finish(cfg, "synth", a.common, true, inputs);

  const auto plan = siv::emitters::plan_from_json(plan_j);
  const auto yield = siv::emitters::yield_model_from_json(section(cfg, "yield"));
  const auto fopts = siv::optics::field_options_from_json(section(cfg, "field"));
  const auto optics = siv::optics::optics_from_json(section(cfg, "optics"));
  surface(optics.warnings(), a.common.strict);

  double tally_energy = plan.energy_mev;
  if (tally) {
    if (!tally_header.contains("energy_mev")) throw siv::ConfigError("tally file does not record its beam energy");
    tally_energy = tally_header.at("energy_mev").get<double>();
  } else {
    tally.emplace(1.0);
  }
  const auto field = siv::optics::generate_emitter_field(plan, yield, *tally, tally_energy, run.seed, fopts);

  siv::optics::Region region{};
  if (!a.region_um.empty()) {
    if (a.region_um.size() != 4) throw UsageError("--region takes x_min,y_min,x_max,y_max");
    region = {a.region_um[0], a.region_um[1], a.region_um[2], a.region_um[3]};
  } else {
    const double margin = siv::config::number_or(section(cfg, "optics"), "map_margin_um", 5.0);
    region = {1e300, 1e300, -1e300, -1e300};
    auto extend = [&](const siv::emitters::PlannedSpot& s) {
      region.x_min_um = std::min(region.x_min_um, s.position_um.x() - margin);
      region.y_min_um = std::min(region.y_min_um, s.position_um.y() - margin);
      region.x_max_um = std::max(region.x_max_um, s.position_um.x() + margin);
      region.y_max_um = std::max(region.y_max_um, s.position_um.y() + margin);
    };
    for (const auto& s : plan.spots) extend(s);
    for (const auto& s : plan.markers) extend(s);
  }
  const auto map = siv::optics::synthesize_confocal_map(field, optics, region, run.seed);

  {
    auto os = open_csv(a.common.out_dir / "field.csv", run, "sivtool synth");
    siv::optics::write_field_csv(os, field);
  }
  siv::optics::write_map_binary(a.common.out_dir / "map.bin", map,
                                {{"config_hash", run.hash}, {"seed", std::to_string(run.seed)}});
  {
    auto os = open_csv(a.common.out_dir / "map.csv", run, "sivtool synth");
    siv::optics::write_map_csv(os, map);
  }
  std::size_t n_direct = 0;
  for (const auto& e : field.emitters) n_direct += e.origin == siv::optics::EmitterOrigin::kDirect;
  Json summary = {{"emitters", field.emitters.size()},
                  {"direct_emitters", n_direct},
                  {"scattered_emitters", field.emitters.size() - n_direct},
                  {"map_nx", map.nx},
                  {"map_ny", map.ny},
                  {"psf_fwhm_nm", optics.fwhm_nm()}};
  if (a.hbt_emitters) {
    auto h = siv::optics::hbt_from_json(section(cfg, "hbt"));
    h.n_emitters = *a.hbt_emitters;
    const auto hist = siv::optics::simulate_hbt(h, run.seed);
    surface(hist.warnings, a.common.strict);
    auto os = open_csv(a.common.out_dir / "hbt.csv", run, "sivtool synth");
    siv::optics::write_histogram_csv(os, hist);
    summary["hbt_rate_a_cps"] = hist.rate_a_cps;
    summary["hbt_rate_b_cps"] = hist.rate_b_cps;
  }
  write_json(a.common.out_dir / "synth.json", summary, run);
  std::cout << "synthesized " << field.emitters.size() << " emitters (" << n_direct << " in planned spots), map "
            << map.nx << "x" << map.ny << '\n';
  return kOk;
}

int cmd_analyze(const AnalyzeArgs& a) {
  Json cfg = load_config(a.common);
  Json detection = section(cfg, "detection");
  if (a.threshold_sigma) detection["threshold_sigma"] = *a.threshold_sigma;
  cfg["detection"] = detection;
  if (a.map.empty() && a.hbt.empty() && a.spectrum.empty())
    throw UsageError("analyze needs at least one of --map, --hbt, --spectrum");
  Json inputs = Json::object();
  for (const auto& [key, path, producer] :
       {std::tuple{"map", a.map, "synth"}, std::tuple{"plan", a.plan, "plan"},
        std::tuple{"hbt", a.hbt, "synth --hbt-emitters"}, std::tuple{"spectrum", a.spectrum, "(external)"}}) {
    if (path.empty()) continue;
    if (!fs::exists(path))
      throw UsageError("missing input " + path.string() + " (produce it with `sivtool " + producer + "`)");
    inputs[key] = path.filename().string();
  }
  const Run run = finish(cfg, "analyze", a.common, false, inputs);
  const auto optics = siv::optics::optics_from_json(section(cfg, "optics"));
  Json report = Json::object();
  bool nonconverged = false;

  if (!a.map.empty()) {
    const auto map = siv::optics::read_map_binary(a.map);
    siv::analysis::DetectOptions d;
    d.threshold_sigma = siv::config::number_or(detection, "threshold_sigma", d.threshold_sigma);
    d.large_spot_ratio = siv::config::number_or(detection, "large_spot_ratio", d.large_spot_ratio);
    auto spots = siv::analysis::detect_spots(map, optics.fwhm_nm(), d.threshold_sigma, d);
    Json assoc = Json::array();
    if (!a.plan.empty()) {
      const auto plan = siv::emitters::plan_from_json(siv::config::load_file(a.plan));
      const double tol = siv::config::number_or(detection, "on_plan_tolerance_um", 1.0);
      std::vector<siv::Vec2> planned;
      std::vector<const siv::emitters::PlannedSpot*> refs;
      for (const auto* list : {&plan.spots, &plan.markers})
        for (const auto& s : *list) {
          planned.push_back(s.position_um);
          refs.push_back(&s);
        }
      siv::analysis::flag_on_plan(spots, planned, tol);
      for (std::size_t i = 0; i < refs.size(); ++i) {
        const int k = siv::analysis::nearest_spot(spots, planned[i], tol);
        assoc.push_back({{"x_um", planned[i].x()},
                         {"y_um", planned[i].y()},
                         {"fluence_cm2", refs[i]->fluence_cm2},
                         {"energy_mev", plan.energy_mev},
                         {"marker", refs[i]->marker},
                         {"spot_index", k}});
      }
    }
    auto os = open_csv(a.common.out_dir / "spots.csv", run, "sivtool analyze");
    siv::analysis::write_spots_csv(os, spots);
    report["spots"] = siv::analysis::spots_to_json(spots);
    report["planned"] = assoc;
    report["psf_fwhm_nm"] = optics.fwhm_nm();
    std::size_t on_plan = 0;
    for (const auto& s : spots) on_plan += s.on_plan;
    std::cout << "detected " << spots.size() << " spots";
    if (!a.plan.empty()) std::cout << " (" << on_plan << " on planned positions)";
    std::cout << '\n';
  }
  if (!a.hbt.empty()) {
    std::ifstream is(a.hbt);
    const auto hist = siv::optics::read_histogram_csv(is);
    siv::analysis::G2Options go;
    go.fit_bunching = section(cfg, "g2_fit").value("fit_bunching", false);
    const auto g2 = siv::analysis::fit_g2(hist, go);
    report["g2"] = siv::analysis::g2_fit_to_json(g2);
    nonconverged = nonconverged || !g2.fit.converged;
    std::cout << "g2(0) = " << g2.g2_zero << " +/- " << g2.g2_zero_sigma << " -> "
              << (g2.single_emitter ? "single emitter" : "not single") << '\n';
  }
  if (!a.spectrum.empty()) {
    std::ifstream is(a.spectrum);
    const auto zpl = siv::analysis::fit_lorentzian_zpl(siv::analysis::read_spectrum_csv(is));
    report["zpl"] = siv::analysis::zpl_fit_to_json(zpl);
    nonconverged = nonconverged || (zpl.line_detected && !zpl.fit.converged);
    if (zpl.line_detected)
      std::cout << "ZPL at " << zpl.center_nm << " nm, FWHM " << zpl.fwhm_nm << " nm, contrast " << zpl.contrast << '\n';
    else
      std::cout << "no line detected\n";
  }
  write_json(a.common.out_dir / "report.json", report, run);
  if (nonconverged) throw NonConvergence("a fit did not converge; partial results written");
  return kOk;
}

int cmd_report(const ReportArgs& a) {
  if (a.analyses.empty()) throw UsageError("report needs at least one --analysis directory");
  Json cfg = load_config(a.common);
  Json inputs = Json::array();
  std::vector<Json> reports;
  for (const auto& dir : a.analyses) {
    reports.push_back(read_json(dir / "report.json", "analyze"));
    inputs.push_back(reports.back().value("config_hash", std::string()));
  }
  const Run run = finish(cfg, "report", a.common, false, inputs);
  const auto calib = siv::emitters::calibration_from_json(section(cfg, "calibration"));
  const Json planning = section(cfg, "planning");
  siv::analysis::YieldOptions yo;
  yo.spot_area_cm2 = siv::config::number_or(planning, "spot_area_cm2", yo.spot_area_cm2);
  yo.throughput_correction = siv::config::number_or(planning, "throughput_correction", yo.throughput_correction);
  yo.throughput_relative_sigma =
      siv::config::number_or(planning, "throughput_relative_sigma_fraction", yo.throughput_relative_sigma);

  std::map<std::pair<double, double>, siv::analysis::SpotGroup> groups;
  std::vector<siv::analysis::SpotRecord> off_plan;
  for (const auto& r : reports) {
    if (!r.contains("spots")) continue;
    yo.psf_fwhm_nm = r.value("psf_fwhm_nm", yo.psf_fwhm_nm);
    std::vector<siv::analysis::SpotRecord> spots;
    for (const auto& s : r.at("spots"))
      spots.push_back({siv::Vec2(s.at("x_um").get<double>(), s.at("y_um").get<double>()),
                       s.at("peak_rate_cps").get<double>(), s.at("integrated_rate_cps").get<double>(),
                       s.at("fwhm_nm").get<double>(), s.at("larger_than_diffraction").get<bool>(),
                       s.at("on_plan").get<bool>(), s.value("peak_rate_sigma_cps", 0.0)});
    for (const auto& s : spots)
      if (!s.on_plan) off_plan.push_back(s);
    for (const auto& p : r.value("planned", Json::array())) {
      if (p.value("marker", false)) continue;
      const double e = p.at("energy_mev").get<double>(), f = p.at("fluence_cm2").get<double>();
      auto& g = groups[{e, f}];
      g.energy_mev = e;
      g.fluence_cm2 = f;
      const int k = p.at("spot_index").get<int>();
      if (k >= 0) {
        g.spots.push_back(spots[static_cast<std::size_t>(k)]);
      } else {
        siv::analysis::SpotRecord none{siv::Vec2(p.at("x_um").get<double>(), p.at("y_um").get<double>()),
                                       0.0, 0.0, yo.psf_fwhm_nm, false, true};
        g.spots.push_back(none);
      }
    }
  }
  Json out = Json::object();
  if (!groups.empty()) {
    std::vector<siv::analysis::SpotGroup> list;
    for (auto& [k, g] : groups) list.push_back(std::move(g));
    const auto yc = siv::analysis::extract_yield_curve(list, calib, yo);
    auto os = open_csv(a.common.out_dir / "yield.csv", run, "sivtool report");
    siv::analysis::write_yield_csv(os, yc.rows);
    out["yield_model"] = siv::emitters::yield_model_to_json(yc.model);
    std::cout << "energy_mev  fluence_cm2  spots  emitters  yield\n";
    for (const auto& r : yc.rows)
      std::cout << std::setw(10) << r.energy_mev << "  " << std::setw(11) << r.fluence_cm2 << "  " << std::setw(5)
                << r.n_spots << "  " << std::setw(8) << std::setprecision(4) << r.mean_emitters << "  "
                << r.yield << '\n';
  }
  try {
    const auto est = siv::analysis::estimate_single_emitter_rate(off_plan);
    out["single_emitter_rate_cps"] = est.value;
    out["single_emitter_rate_sigma_cps"] = est.sigma;
    out["single_emitter_spots"] = off_plan.size();
  } catch (const siv::DomainError&) {
  }
  write_json(a.common.out_dir / "summary.json", out, run);
  return kOk;
}

}  // namespace sivtool
