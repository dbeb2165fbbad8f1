#include "extenso/densities.hpp"
#include "extenso/error.hpp"
#include "json.hpp"

namespace extenso {

Density density_from_kind(std::string_view kind, const std::map<std::string, double>& params) {
  if (kind == "bg") return bg_density();
  if (kind == "tsallis") {
    const auto it = params.find("q");
    if (it == params.end()) throw Error(Errc::invalid_parameter, "tsallis needs params.q");
    return tsallis_density(it->second);
  }
  if (kind == "remark2" || kind == "oscillating") return oscillating_density();
  if (kind == "remark5" || kind == "log_sine") return log_sine_density();
  throw Error(Errc::invalid_parameter, "unknown density kind '" + std::string(kind) + "'");
}

Density density_from_spec(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw Error(Errc::parse_error, "density spec needs a string field 'kind'");
  }
  std::map<std::string, double> params;
  if (doc.contains("params")) {
    const auto& p = doc["params"];
    if (!p.is_object()) throw Error(Errc::parse_error, "'params' must be an object");
    for (const auto& [key, value] : p.items()) {
      if (!value.is_number()) throw Error(Errc::parse_error, "parameter '" + key + "' must be numeric");
      params[key] = value.get<double>();
    }
  }
  return density_from_kind(doc["kind"].get<std::string>(), params);
}

}  // namespace extenso
