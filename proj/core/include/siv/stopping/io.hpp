#pragma once

#include "siv/config.hpp"
#include "siv/stopping/material.hpp"
#include "siv/stopping/stopping.hpp"

namespace siv::stopping {

/// Material from config, either `{"preset": "diamond" | "steel"}` or
///   {"name": "...", "density_g_cm3": 3.52,
///    "composition": [{"element": "C", "fraction": 1.0, "mass_u": 12.011}]}
/// where mass_u defaults to the standard atomic weight.
TargetMaterial material_from_json(const config::Json& j);
config::Json material_to_json(const TargetMaterial& m);

/// `{"element": "Si", "mass_u": 28.0}`; both keys optional (defaults to Si-28).
IonSpecies ion_from_json(const config::Json& j);

/// `{"electronic": "tabulated" | "lindhard_scharff", "cutoff_ev": ...,
///   "max_impact_parameter_nm": ..., "lindhard_correction": ...,
///   "projected_range_factor": ...}`; all keys optional.
StoppingModel stopping_model_from_json(const config::Json& j);

}  // namespace siv::stopping
