#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

namespace siv::config {

using Json = nlohmann::json;

/// Parses a JSON configuration file. Throws ConfigError on I/O or syntax errors.
Json load_file(const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the canonical (sorted-key, compact) serialization.
std::uint64_t hash(const Json& cfg);
std::string hash_hex(const Json& cfg);

/// Writes `# config_hash=<hex> seed=<seed>` plus optional extra comment lines.
/// Every CSV the toolkit emits starts with this block.
void write_provenance(std::ostream& os, std::string_view config_hash,
                      std::uint64_t seed, std::string_view producer);

/// Reads a required number; throws ConfigError naming the key on failure.
double require_number(const Json& obj, std::string_view key);

/// Reads an optional number with default.
double number_or(const Json& obj, std::string_view key, double fallback);

/// Rejects keys that look like physical quantities but carry no unit suffix.
/// Accepted suffixes are listed in config.cpp; dimensionless keys are allow-listed.
void check_unit_suffixes(const Json& obj, std::string_view context);

}  // namespace siv::config
