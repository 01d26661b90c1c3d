#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sivtool {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kWarningEscalated = 3, kNonConvergence = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EscalatedWarning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
  /// Physics-configuration warnings become errors (exit 3).
  bool strict = false;
};

struct PlanArgs {
  Common common;
  std::string preset;
  std::optional<int> rows;
  std::optional<int> columns;
};

struct TransportArgs {
  Common common;
  std::optional<std::uint64_t> histories;
  std::optional<double> energy_mev;
  std::optional<double> wall_angle_deg;
  std::vector<double> distances_mm;
  std::vector<double> sweep_angles_deg;
  std::vector<double> sweep_energies_mev;
  unsigned threads = 0;
};

struct SynthArgs {
  Common common;
  std::filesystem::path plan;
  std::filesystem::path tally;
  std::vector<double> region_um;
  std::optional<int> hbt_emitters;
};

struct AnalyzeArgs {
  Common common;
  std::filesystem::path map;
  std::filesystem::path plan;
  std::filesystem::path hbt;
  std::filesystem::path spectrum;
  std::optional<double> threshold_sigma;
};

struct ReportArgs {
  Common common;
  std::vector<std::filesystem::path> analyses;
};

int cmd_plan(const PlanArgs& args);
int cmd_transport(const TransportArgs& args);
int cmd_synth(const SynthArgs& args);
int cmd_analyze(const AnalyzeArgs& args);
int cmd_report(const ReportArgs& args);

}  // namespace sivtool
