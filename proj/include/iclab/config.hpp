#pragma once

#include <string>

#include "iclab/experiments.hpp"

namespace iclab {

// Experiment config from a file. JSON is full; TOML is the documented subset:
// flat `key = value` lines with strings, integers, floats and booleans,
// optional [section] headers turning into dotted prefixes, # comments.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

// A manifest echoes the full run (config, seed, outputs); loading one back
// reproduces the run bit-exactly.
ExperimentConfig config_from_manifest(const std::string& path);

}  // namespace iclab
