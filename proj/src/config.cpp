#include "frbe/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "frbe/errors.hpp"

namespace frbe {

namespace {

using nlohmann::json;

const json& require_object(const json& doc, const std::string& path) {
    if (!doc.contains(path))
        throw ConfigError(path, "missing required section");
    const json& section = doc.at(path);
    if (!section.is_object()) throw ConfigError(path, "must be an object");
    return section;
}

double require_number(const json& section, const std::string& prefix, const char* key) {
    const std::string path = prefix + "." + key;
    if (!section.contains(key)) throw ConfigError(path, "missing required field");
    const json& v = section.at(key);
    if (!v.is_number()) throw ConfigError(path, "must be a number");
    return v.get<double>();
}

double optional_number(const json& section, const std::string& prefix, const char* key,
                       double fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_number()) throw ConfigError(prefix + "." + key, "must be a number");
    return v.get<double>();
}

int optional_int(const json& section, const std::string& prefix, const char* key,
                 int fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_number_integer()) throw ConfigError(prefix + "." + key, "must be an integer");
    return v.get<int>();
}

std::uint64_t optional_u64(const json& section, const std::string& prefix, const char* key,
                           std::uint64_t fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ConfigError(prefix + "." + key, "must be a nonnegative integer");
    if (v.is_number_integer() && v.get<long long>() < 0)
        throw ConfigError(prefix + "." + key, "must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> require_number_array(const json& section, const std::string& prefix,
                                         const char* key) {
    const std::string path = prefix + "." + key;
    if (!section.contains(key)) throw ConfigError(path, "missing required field");
    const json& v = section.at(key);
    if (!v.is_array()) throw ConfigError(path, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& item : v) {
        if (!item.is_number()) throw ConfigError(path, "must be an array of numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "configuration root must be an object");
    ExperimentConfig cfg;
    cfg.raw = doc;

    const json& model = require_object(doc, "model");
    cfg.model.alpha = require_number(model, "model", "alpha");
    cfg.model.beta = require_number(model, "model", "beta");
    cfg.model.gamma_b = require_number(model, "model", "gamma");
    cfg.model.mu = require_number(model, "model", "mu");

    const json& spectrum = require_object(doc, "spectrum");
    cfg.spectrum.kappa = require_number_array(spectrum, "spectrum", "kappa");
    cfg.spectrum.w = require_number_array(spectrum, "spectrum", "w");
    cfg.spectrum.A = require_number_array(spectrum, "spectrum", "A");

    const json& kernel = require_object(doc, "kernel");
    std::string family = "matern";
    if (kernel.contains("family")) {
        if (!kernel.at("family").is_string())
            throw ConfigError("kernel.family", "must be a string");
        family = kernel.at("family").get<std::string>();
    }
    if (family != "matern")
        throw ConfigError("kernel.family",
                          "unknown kernel family '" + family +
                              "' (configuration files support \"matern\")");
    cfg.kernel.family = KernelFamily::Matern;
    cfg.kernel.nu = require_number(kernel, "kernel", "nu");
    cfg.kernel.a = require_number(kernel, "kernel", "a");

    if (doc.contains("grid")) {
        const json& grid = require_object(doc, "grid");
        cfg.grid.delta = optional_number(grid, "grid", "delta", cfg.grid.delta);
        cfg.grid.n_modes = optional_int(grid, "grid", "n_modes", cfg.grid.n_modes);
        cfg.grid.offset = optional_number(grid, "grid", "offset", cfg.grid.offset);
    }
    if (doc.contains("lattice")) {
        const json& lat = require_object(doc, "lattice");
        cfg.lattice.t_min = optional_number(lat, "lattice", "t_min", cfg.lattice.t_min);
        cfg.lattice.t_max = optional_number(lat, "lattice", "t_max", cfg.lattice.t_max);
        cfg.lattice.t_steps = optional_int(lat, "lattice", "t_steps", cfg.lattice.t_steps);
        cfg.lattice.x_min = optional_number(lat, "lattice", "x_min", cfg.lattice.x_min);
        cfg.lattice.x_max = optional_number(lat, "lattice", "x_max", cfg.lattice.x_max);
        cfg.lattice.x_steps = optional_int(lat, "lattice", "x_steps", cfg.lattice.x_steps);
    }
    if (doc.contains("seeds")) {
        const json& seeds = require_object(doc, "seeds");
        cfg.seeds.base_seed = optional_u64(seeds, "seeds", "base_seed", cfg.seeds.base_seed);
        cfg.seeds.ensemble_size =
            optional_int(seeds, "seeds", "ensemble_size", cfg.seeds.ensemble_size);
    }
    if (doc.contains("run")) {
        if (!doc.at("run").is_object()) throw ConfigError("run", "must be an object");
        cfg.run = doc.at("run");
    } else {
        cfg.run = json::object();
    }

    cfg.model.validate();
    cfg.spectrum.validate();
    cfg.kernel.validate();
    if (cfg.lattice.t_steps < 1 || cfg.lattice.x_steps < 1)
        throw ConfigError("lattice", "t_steps and x_steps must be >= 1");
    if (!(cfg.lattice.t_min <= cfg.lattice.t_max) || !(cfg.lattice.x_min <= cfg.lattice.x_max))
        throw ConfigError("lattice", "t_min/x_min must not exceed t_max/x_max");
    if (cfg.seeds.ensemble_size < 1)
        throw ConfigError("seeds.ensemble_size", "must be >= 1");
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path,
                                        const std::vector<std::string>& override_tokens) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open configuration file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    for (const auto& [key, value] : parse_override_tokens(override_tokens))
        apply_override(doc, key, value);
    return from_json(doc);
}

void apply_override(nlohmann::json& doc, const std::string& path, const std::string& value) {
    if (path.empty()) throw ConfigError("override", "empty override path");
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos
                                                        ? std::string::npos
                                                        : dot - start);
        if (part.empty()) throw ConfigError(path, "override path has an empty segment");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[part];
        if (!node->is_object() && !node->is_null())
            throw ConfigError(path, "override path crosses a non-object value");
        start = dot + 1;
    }
}

std::vector<std::pair<std::string, std::string>> parse_override_tokens(
    const std::vector<std::string>& tokens) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        if (tok.rfind("--", 0) != 0)
            throw ConfigError("override",
                              "unexpected argument '" + tok +
                                  "' (overrides look like --section.field value)");
        std::string path = tok.substr(2);
        std::string value;
        const std::size_t eq = path.find('=');
        if (eq != std::string::npos) {
            value = path.substr(eq + 1);
            path = path.substr(0, eq);
        } else {
            if (i + 1 >= tokens.size())
                throw ConfigError(path, "override is missing a value");
            value = tokens[++i];
        }
        if (path.empty()) throw ConfigError("override", "override is missing a field path");
        out.emplace_back(std::move(path), std::move(value));
    }
    return out;
}

std::string config_hash(const nlohmann::json& doc) {
    const std::string dump = doc.dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
        hash ^= static_cast<std::uint64_t>(ch);
        hash *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return hex;
}

}
