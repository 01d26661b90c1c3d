#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "siv/errors.hpp"

namespace {

void add_common(CLI::App* cmd, sivtool::Common& c, bool seeded) {
  cmd->add_option("-c,--config", c.config_path, "JSON configuration file");
  cmd->add_option("-o,--out", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("-s,--seed", c.seed, seeded ? "Master seed (required)" : "Master seed recorded in outputs");
  cmd->add_flag("--strict", c.strict, "Treat physics-configuration warnings as errors (exit 3)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan, simulate and analyze localized SiV implantation through a pinhole"};
  app.require_subcommand(1);

  sivtool::PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Build an implantation plan from a session preset or config");
  add_common(p, plan.common, false);
  p->add_option("--preset", plan.preset, "Session preset A, B, C or D");
  p->add_option("--rows", plan.rows, "Override the number of rows");
  p->add_option("--columns", plan.columns, "Override the number of columns");

  sivtool::TransportArgs tr;
  auto* t = app.add_subcommand("transport", "Monte Carlo transport of the beam through the pinhole");
  add_common(t, tr.common, true);
  t->add_option("-n,--histories", tr.histories, "Number of ion histories");
  t->add_option("--energy-mev", tr.energy_mev, "Beam energy override");
  t->add_option("--wall-angle-deg", tr.wall_angle_deg, "Pinhole wall angle override");
  t->add_option("--distance-mm", tr.distances_mm, "Pinhole-sample distances")->delimiter(',');
  t->add_option("--sweep-angles-deg", tr.sweep_angles_deg, "Wall angles for a scattered/direct sweep")->delimiter(',');
  t->add_option("--sweep-energies-mev", tr.sweep_energies_mev, "Energies for the sweep")->delimiter(',');
  t->add_option("--threads", tr.threads, "Worker threads (0: all cores)");

  sivtool::SynthArgs sy;
  auto* s = app.add_subcommand("synth", "Realize emitters and synthesize a confocal map");
  add_common(s, sy.common, true);
  s->add_option("--plan", sy.plan, "plan.json from `sivtool plan`")->required();
  s->add_option("--tally", sy.tally, "Tally file from `sivtool transport` (scattered background)");
  s->add_option("--region-um", sy.region_um, "Map region x_min,y_min,x_max,y_max")->delimiter(',');
  s->add_option("--hbt-emitters", sy.hbt_emitters, "Also simulate an HBT histogram for this many emitters");

  sivtool::AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Detect spots and fit spectra and correlation histograms");
  add_common(a, an.common, false);
  a->add_option("--map", an.map, "map.bin from `sivtool synth` or a measurement");
  a->add_option("--plan", an.plan, "plan.json for on-plan flags");
  a->add_option("--hbt", an.hbt, "Coincidence histogram CSV");
  a->add_option("--spectrum", an.spectrum, "Spectrum CSV (wavelength_nm,counts)");
  a->add_option("--threshold-sigma", an.threshold_sigma, "Detection threshold in background sigmas");

  sivtool::ReportArgs rp;
  auto* r = app.add_subcommand("report", "Yield table and single-emitter calibration from analyses");
  add_common(r, rp.common, false);
  r->add_option("--analysis", rp.analyses, "Directories holding report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sivtool::kUsage;
  }

  try {
    if (*p) return sivtool::cmd_plan(plan);
    if (*t) return sivtool::cmd_transport(tr);
    if (*s) return sivtool::cmd_synth(sy);
    if (*a) return sivtool::cmd_analyze(an);
    if (*r) return sivtool::cmd_report(rp);
  } catch (const sivtool::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return sivtool::kUsage;
  } catch (const sivtool::EscalatedWarning& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sivtool::kWarningEscalated;
  } catch (const sivtool::NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sivtool::kNonConvergence;
  } catch (const siv::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return sivtool::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sivtool::kFailure;
  }
  return sivtool::kUsage;
}
