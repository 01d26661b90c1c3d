#pragma once

#include <string_view>

namespace siv::stopping {

struct Element {
  int z;
  std::string_view symbol;
  double mass_u;  // standard atomic weight
};

/// Lookup by chemical symbol (case-sensitive, e.g. "Fe"). Throws ConfigError.
const Element& element_by_symbol(std::string_view symbol);

/// Lookup by atomic number. Throws ConfigError for unsupported Z.
const Element& element_by_z(int z);

}  // namespace siv::stopping
