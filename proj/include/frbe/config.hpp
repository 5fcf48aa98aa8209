#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "frbe/kernels.hpp"
#include "frbe/spectral.hpp"

namespace frbe {

struct GridConfig {
    double delta = 0.01;
    int n_modes = 1000;
    double offset = 0.0;
};

struct LatticeConfig {
    double t_min = 0.0;
    double t_max = 2.0;
    int t_steps = 21;
    double x_min = 0.0;
    double x_max = 40.0;
    int x_steps = 401;
};

struct SeedConfig {
    std::uint64_t base_seed = 1;
    int ensemble_size = 1;
};

/// Fully resolved experiment configuration. `run` holds the
/// subcommand-specific options verbatim; `raw` is the resolved JSON document
/// the configuration was built from (after overrides), used for hashing and
/// for the output metadata.
struct ExperimentConfig {
    ModelParams model;
    SpectralSpec spectrum;
    KernelSpec kernel;
    GridConfig grid;
    LatticeConfig lattice;
    SeedConfig seeds;
    nlohmann::json run;
    nlohmann::json raw;

    /// Parses and validates; throws ConfigError naming the field on failure.
    static ExperimentConfig from_json(const nlohmann::json& doc);

    /// Reads a JSON file, applies dotted-path overrides, then parses.
    static ExperimentConfig load(const std::string& path,
                                 const std::vector<std::string>& override_tokens);
};

/// Sets doc[path] where path is dotted ("model.alpha"); the value string is
/// parsed as JSON when possible and stored as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& path, const std::string& value);

/// Turns CLI leftovers ("--model.alpha", "1.0", ...) into (path, value)
/// pairs; throws ConfigError on stray tokens.
std::vector<std::pair<std::string, std::string>> parse_override_tokens(
    const std::vector<std::string>& tokens);

/// FNV-1a 64-bit hash of the canonical (sorted-key) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

}
