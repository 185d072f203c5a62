#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bkmoments/generator.hpp"
#include "bkmoments/models.hpp"

namespace bkm {

using PresetParams = std::variant<OuParams, VanDerPolParams>;

/// A model plus the expansion origin (= initial condition x_ini).
///
/// JSON layout, either
///   {"preset": "ou",  "params": {"gamma": 1, "sigma": 0.5, "x_ini": 1}}
///   {"preset": "vdp", "params": {"epsilon": 1, "nu11": 0.5, "nu22": 0.5,
///                                "x_ini_1": 0.5, "x_ini_2": 1}}
/// or explicit polynomials
///   {"dimension": 1,
///    "drift": [[{"coeff": -1, "exponents": [1]}]],
///    "diffusion": [[[{"coeff": 0.25, "exponents": [0]}]]],
///    "origin": [1.0]}
/// Missing preset parameters take the defaults of OuParams / VanDerPolParams.
struct ModelConfig {
    SdeModel model;
    std::vector<double> origin;
    std::optional<PresetParams> preset;

    Generator compile() const { return compile_generator(model, origin); }
};

ModelConfig model_config_from_preset(const PresetParams& params);
/// Looks up "ou" or "vdp" with default parameters.
ModelConfig model_config_from_preset_name(const std::string& name);

ModelConfig parse_model_config(const nlohmann::json& j);
ModelConfig load_model_config(const std::string& path);

/// Serializes with explicit polynomials (presets are expanded).
nlohmann::json model_config_to_json(const ModelConfig& cfg);
/// Serializes a preset config as {"preset", "params"}.
nlohmann::json preset_to_json(const PresetParams& params);

}  // namespace bkm
