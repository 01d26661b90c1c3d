#include "siv/config.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "siv/errors.hpp"

namespace siv::config {

Json load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
}

std::uint64_t hash(const Json& cfg) {
  // nlohmann::json objects are std::map backed, so dump() is key-sorted.
  const std::string canon = cfg.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(const Json& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash(cfg)));
  return buf;
}

void write_provenance(std::ostream& os, std::string_view config_hash,
                      std::uint64_t seed, std::string_view producer) {
  os << "# config_hash=" << config_hash << " seed=" << seed << '\n';
  if (!producer.empty()) os << "# producer=" << producer << '\n';
}

double require_number(const Json& obj, std::string_view key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw ConfigError("missing or non-numeric config key '" + std::string(key) + "'");
  return it->get<double>();
}

double number_or(const Json& obj, std::string_view key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number())
    throw ConfigError("config key '" + std::string(key) + "' must be numeric");
  return it->get<double>();
}

namespace {

constexpr std::array kUnitSuffixes = {
    "_ev",  "_kev", "_mev", "_nm",  "_um",  "_mm",   "_cm2", "_g_cm3",
    "_deg", "_mrad", "_s",  "_ms",  "_ns",  "_cps",  "_mw",  "_u",
    "_per_ns", "_per_um2",
};

// Dimensionless or non-physical keys.
constexpr std::array kDimensionless = {
    "seed",          "histories", "threads",      "rows",        "columns",
    "na",            "fraction",  "z",            "atomic_number", "yield",
    "detection_efficiency", "throughput_correction", "threshold_sigma",
    "n_emitters",    "brightness_sigma", "area_ratio", "lambda",
    "projected_range_factor", "lindhard_correction", "scatter_fraction",
    "probability",   "margin",    "ratio",        "passes",
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void check_unit_suffixes(const Json& obj, std::string_view context) {
  if (!obj.is_object()) return;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      check_unit_suffixes(value, key);
      continue;
    }
    if (!value.is_number()) continue;
    bool ok = false;
    for (auto s : kUnitSuffixes) ok = ok || ends_with(key, s);
    for (auto d : kDimensionless) ok = ok || key == d || ends_with(key, std::string("_") + d);
    if (!ok)
      throw ConfigError("config key '" + std::string(context) + "." + key +
                        "' has no unit suffix (e.g. _mev, _um, _cm2)");
  }
}

}  // namespace siv::config
