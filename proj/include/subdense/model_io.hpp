#pragma once

#include <string>

#include <json.hpp>

#include "subdense/bernstein.hpp"
#include "subdense/green_heat.hpp"

namespace subdense {

/// Build a model from a spec document. Throws SpecFormatError for missing
/// or mistyped fields and ModelInvalidError when the model fails its checks.
BernsteinModel model_from_json(const nlohmann::json& doc);
BernsteinModel parse_model(const std::string& text);
BernsteinModel load_model(const std::string& path);

/// {"kind":"fractal","n":..,"gamma":..} or {"kind":"gaussian","n":..,"c1":..,"c2":..};
/// "sierpinski" needs no parameters.
HeatProfile profile_from_json(const nlohmann::json& doc);
HeatProfile load_profile(const std::string& path);

/// Reads a whole JSON document, reporting syntax errors by line and column.
nlohmann::json read_json_file(const std::string& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

}  // namespace subdense
