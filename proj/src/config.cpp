#include "bkmoments/config.hpp"

#include <fstream>
#include <sstream>

namespace bkm {
namespace {

using nlohmann::json;

double number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw InvalidArgument(std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw InvalidArgument("unknown key '" + key + "' in " + where);
    }
}

Polynomial parse_polynomial(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array()) throw InvalidArgument(where + " must be a list of {coeff, exponents} terms");
    std::vector<std::pair<MultiIndex, double>> terms;
    for (const auto& t : j) {
        if (!t.is_object() || !t.contains("coeff") || !t.contains("exponents")) {
            throw InvalidArgument(where + ": every term needs 'coeff' and 'exponents'");
        }
        reject_unknown(t, {"coeff", "exponents"}, where);
        if (!t.at("coeff").is_number()) throw InvalidArgument(where + ": 'coeff' must be a number");
        const auto& e = t.at("exponents");
        if (!e.is_array() || e.size() != dim) {
            throw InvalidArgument(where + ": 'exponents' must list " + std::to_string(dim) + " integers");
        }
        std::vector<int> exps;
        for (const auto& x : e) {
            if (!x.is_number_integer()) throw InvalidArgument(where + ": exponents must be integers");
            exps.push_back(x.get<int>());
        }
        terms.emplace_back(make_multi_index(exps), t.at("coeff").get<double>());
    }
    return Polynomial(dim, terms);
}

json polynomial_to_json(const Polynomial& p) {
    json out = json::array();
    for (const auto& [exp, c] : p.terms()) {
        out.push_back({{"coeff", c}, {"exponents", exp.to_vector()}});
    }
    return out;
}

PresetParams parse_preset(const std::string& name, const json& params) {
    if (!params.is_object()) throw InvalidArgument("'params' must be an object");
    if (name == "ou") {
        reject_unknown(params, {"gamma", "sigma", "x_ini"}, "ou params");
        OuParams p;
        p.gamma = number(params, "gamma", p.gamma);
        p.sigma = number(params, "sigma", p.sigma);
        p.x_ini = number(params, "x_ini", p.x_ini);
        return p;
    }
    if (name == "vdp") {
        reject_unknown(params, {"epsilon", "nu11", "nu22", "x_ini_1", "x_ini_2"}, "vdp params");
        VanDerPolParams p;
        p.epsilon = number(params, "epsilon", p.epsilon);
        p.nu11 = number(params, "nu11", p.nu11);
        p.nu22 = number(params, "nu22", p.nu22);
        p.x_ini_1 = number(params, "x_ini_1", p.x_ini_1);
        p.x_ini_2 = number(params, "x_ini_2", p.x_ini_2);
        return p;
    }
    throw InvalidArgument("unknown preset '" + name + "' (expected ou or vdp)");
}

}  // namespace

ModelConfig model_config_from_preset(const PresetParams& params) {
    ModelConfig cfg;
    std::visit(
        [&cfg](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, OuParams>) {
                cfg.model = build_ou(p);
            } else {
                cfg.model = build_van_der_pol(p);
            }
            cfg.origin = origin_of(p);
        },
        params);
    cfg.preset = params;
    return cfg;
}

ModelConfig model_config_from_preset_name(const std::string& name) {
    return model_config_from_preset(parse_preset(name, json::object()));
}

ModelConfig parse_model_config(const json& j) {
    if (!j.is_object()) throw InvalidArgument("model config must be a JSON object");
    if (j.contains("preset")) {
        reject_unknown(j, {"preset", "params", "origin"}, "preset config");
        if (!j.at("preset").is_string()) throw InvalidArgument("'preset' must be a string");
        ModelConfig cfg = model_config_from_preset(
            parse_preset(j.at("preset").get<std::string>(), j.value("params", json::object())));
        if (j.contains("origin")) {
            const auto given = j.at("origin").get<std::vector<double>>();
            if (given != cfg.origin) {
                throw InvalidArgument("preset configs take their origin from the x_ini parameters");
            }
        }
        return cfg;
    }

    reject_unknown(j, {"dimension", "drift", "diffusion", "origin"}, "model config");
    for (const char* key : {"dimension", "drift", "diffusion", "origin"}) {
        if (!j.contains(key)) throw InvalidArgument(std::string("model config is missing '") + key + "'");
    }
    if (!j.at("dimension").is_number_integer()) throw InvalidArgument("'dimension' must be an integer");
    const int raw_dim = j.at("dimension").get<int>();
    if (raw_dim < 1 || raw_dim > static_cast<int>(kMaxDim)) {
        throw InvalidArgument("'dimension' must be between 1 and " + std::to_string(kMaxDim));
    }
    const auto dim = static_cast<std::size_t>(raw_dim);

    ModelConfig cfg;
    cfg.model.dimension = dim;
    const auto& drift = j.at("drift");
    if (!drift.is_array() || drift.size() != dim) {
        throw InvalidArgument("'drift' must hold " + std::to_string(dim) + " polynomials");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        cfg.model.drift.push_back(parse_polynomial(drift[i], dim, "drift[" + std::to_string(i) + "]"));
    }
    const auto& diff = j.at("diffusion");
    if (!diff.is_array() || diff.size() != dim) throw InvalidArgument("'diffusion' must be a D x D matrix");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!diff[i].is_array() || diff[i].size() != dim) throw InvalidArgument("'diffusion' must be a D x D matrix");
        std::vector<Polynomial> row;
        for (std::size_t k = 0; k < dim; ++k) {
            row.push_back(parse_polynomial(diff[i][k], dim,
                                           "diffusion[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
        }
        cfg.model.diffusion.push_back(std::move(row));
    }
    const auto& origin = j.at("origin");
    if (!origin.is_array() || origin.size() != dim) {
        throw InvalidArgument("'origin' must list " + std::to_string(dim) + " numbers");
    }
    for (const auto& x : origin) {
        if (!x.is_number()) throw InvalidArgument("'origin' entries must be numbers");
        cfg.origin.push_back(x.get<double>());
    }
    cfg.model.validate();
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open model config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument("cannot parse model config '" + path + "': " + e.what());
    }
    try {
        return parse_model_config(j);
    } catch (const json::exception& e) {
        throw InvalidArgument("malformed model config '" + path + "': " + e.what());
    }
}

json model_config_to_json(const ModelConfig& cfg) {
    json out;
    out["dimension"] = cfg.model.dimension;
    json drift = json::array();
    for (const auto& a : cfg.model.drift) drift.push_back(polynomial_to_json(a));
    out["drift"] = std::move(drift);
    json diff = json::array();
    for (const auto& row : cfg.model.diffusion) {
        json r = json::array();
        for (const auto& p : row) r.push_back(polynomial_to_json(p));
        diff.push_back(std::move(r));
    }
    out["diffusion"] = std::move(diff);
    out["origin"] = cfg.origin;
    return out;
}

json preset_to_json(const PresetParams& params) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, OuParams>) {
                return {{"preset", "ou"}, {"params", {{"gamma", p.gamma}, {"sigma", p.sigma}, {"x_ini", p.x_ini}}}};
            } else {
                return {{"preset", "vdp"},
                        {"params",
                         {{"epsilon", p.epsilon},
                          {"nu11", p.nu11},
                          {"nu22", p.nu22},
                          {"x_ini_1", p.x_ini_1},
                          {"x_ini_2", p.x_ini_2}}}};
            }
        },
        params);
}

}  // namespace bkm
