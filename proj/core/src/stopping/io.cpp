#include "siv/stopping/io.hpp"

#include "siv/errors.hpp"
#include "siv/stopping/elements.hpp"

namespace siv::stopping {

TargetMaterial material_from_json(const config::Json& j) {
  if (!j.is_object()) throw ConfigError("material must be an object");
  if (j.contains("preset")) {
    const auto p = j.at("preset").get<std::string>();
    if (p == "diamond") return TargetMaterial::diamond();
    if (p == "steel") return TargetMaterial::steel();
    throw ConfigError("unknown material preset '" + p + "'");
  }
  if (!j.contains("composition") || !j.at("composition").is_array())
    throw ConfigError("material needs a 'composition' array or a 'preset'");
  std::vector<MaterialComponent> comps;
  for (const auto& c : j.at("composition")) {
    if (!c.contains("element")) throw ConfigError("composition entry needs 'element'");
    const auto& el = element_by_symbol(c.at("element").get<std::string>());
    comps.push_back({el.z, config::number_or(c, "mass_u", el.mass_u),
                     config::require_number(c, "fraction")});
  }
  return TargetMaterial(j.value("name", std::string("material")), std::move(comps),
                        config::require_number(j, "density_g_cm3"));
}

config::Json material_to_json(const TargetMaterial& m) {
  config::Json comps = config::Json::array();
  for (const auto& c : m.components())
    comps.push_back({{"element", std::string(element_by_z(c.atomic_number).symbol)},
                     {"mass_u", c.mass_u},
                     {"fraction", c.fraction}});
  return {{"name", m.name()}, {"density_g_cm3", m.mass_density_g_cm3()}, {"composition", comps}};
}

IonSpecies ion_from_json(const config::Json& j) {
  IonSpecies ion;
  if (j.contains("element")) {
    const auto& el = element_by_symbol(j.at("element").get<std::string>());
    ion.atomic_number = el.z;
    ion.mass_u = el.z == 14 ? 28.0 : el.mass_u;
  }
  ion.mass_u = config::number_or(j, "mass_u", ion.mass_u);
  ion.validate();
  return ion;
}

StoppingModel stopping_model_from_json(const config::Json& j) {
  StoppingModel m;
  if (j.contains("electronic")) {
    const auto e = j.at("electronic").get<std::string>();
    if (e == "tabulated") m.electronic = ElectronicModel::kTabulated;
    else if (e == "lindhard_scharff") m.electronic = ElectronicModel::kLindhardScharff;
    else throw ConfigError("unknown electronic stopping model '" + e + "'");
  }
  m.energy_cutoff_ev = config::number_or(j, "cutoff_ev", m.energy_cutoff_ev);
  if (j.contains("max_impact_parameter_nm"))
    m.max_impact_parameter_nm = config::require_number(j, "max_impact_parameter_nm");
  m.lindhard_correction = config::number_or(j, "lindhard_correction", m.lindhard_correction);
  m.projected_range_factor =
      config::number_or(j, "projected_range_factor", m.projected_range_factor);
  m.validate();
  return m;
}

}  // namespace siv::stopping
