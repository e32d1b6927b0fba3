#include "planetspec/profile_io.hpp"

#include <fstream>

#include "planetspec/common.hpp"

namespace planetspec {

namespace {

double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw InvalidArgument(std::string("profile: missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

std::shared_ptr<const SpeedModel> model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("model") || !j.at("model").is_string())
    throw InvalidArgument("profile: each layer needs a 'model' string");
  const std::string m = j.at("model").get<std::string>();
  if (m == "constant") return std::make_shared<ConstantSpeed>(number(j, "c"));
  if (m == "log") return std::make_shared<LogSpeed>(number(j, "a"), number(j, "b"));
  if (m == "power") return std::make_shared<PowerSpeed>(number(j, "c0"), number(j, "exponent"));
  if (m == "lnpoly") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array())
      throw InvalidArgument("profile: lnpoly needs a 'coeffs' array");
    return std::make_shared<LnPolySpeed>(j.at("coeffs").get<std::vector<double>>());
  }
  if (m == "poly") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array())
      throw InvalidArgument("profile: poly needs a 'coeffs' array");
    return std::make_shared<PolySpeed>(j.at("coeffs").get<std::vector<double>>());
  }
  if (m == "spline") {
    if (!j.contains("knots") || !j.at("knots").is_array())
      throw InvalidArgument("profile: spline needs a 'knots' array");
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
        throw InvalidArgument("profile: spline knots are [r, c] pairs");
      knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    return std::make_shared<SplineSpeed>(std::move(knots));
  }
  if (m == "scaled") {
    if (!j.contains("inner")) throw InvalidArgument("profile: scaled needs 'inner'");
    return std::make_shared<ScaledSpeed>(model_from_json(j.at("inner")), number(j, "factor"));
  }
  throw InvalidArgument("profile: unknown model '" + m + "'");
}

}  // namespace

LayeredProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("profile: top level must be an object");
  const double inner = j.contains("inner_radius") ? number(j, "inner_radius") : 0.0;
  std::vector<double> interfaces;
  if (j.contains("interfaces")) {
    if (!j.at("interfaces").is_array()) throw InvalidArgument("profile: 'interfaces' must be an array");
    for (const auto& r : j.at("interfaces")) {
      if (!r.is_number()) throw InvalidArgument("profile: interface radii must be numbers");
      interfaces.push_back(r.get<double>());
    }
  }
  if (!j.contains("layers") || !j.at("layers").is_array())
    throw InvalidArgument("profile: 'layers' array is required");
  std::vector<std::shared_ptr<const SpeedModel>> layers;
  for (const auto& l : j.at("layers")) layers.push_back(model_from_json(l));
  std::optional<std::vector<LayerDensity>> density;
  if (j.contains("density") && !j.at("density").is_null()) {
    if (!j.at("density").is_array()) throw InvalidArgument("profile: 'density' must be an array");
    density.emplace();
    for (const auto& d : j.at("density")) {
      LayerDensity e;
      e.density = number(d, "rho");
      if (d.contains("mu")) e.mu = number(d, "mu");
      density->push_back(e);
    }
  }
  return LayeredProfile(inner, std::move(interfaces), std::move(layers), std::move(density));
}

LayeredProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open profile file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed profile JSON: ") + e.what());
  }
  return profile_from_json(j);
}

}  // namespace planetspec
