#include "iclab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace iclab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, e - b + 1);
}

// key = value lines into a flat JSON object
nlohmann::json parse_toml_subset(std::istream& in) {
  nlohmann::json j = nlohmann::json::object();
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("toml: expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw config_error("toml: empty key or value at line " + std::to_string(lineno));
    if (!section.empty()) key = section + "." + key;
    if (value.front() == '"' && value.back() == '"' && value.size() >= 2) {
      j[key] = value.substr(1, value.size() - 2);
    } else if (value == "true" || value == "false") {
      j[key] = (value == "true");
    } else if (value.find_first_of(".eE") != std::string::npos &&
               value.find("0x") == std::string::npos) {
      j[key] = std::stod(value);
    } else {
      j[key] = static_cast<std::uint64_t>(std::stoull(value, nullptr, 0));
    }
  }
  return j;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    read_field(j, "kind", cfg.kind);
    read_field(j, "subject", cfg.subject);
    // family/sequence accepted as aliases for subject
    if (cfg.subject.empty()) read_field(j, "family", cfg.subject);
    if (cfg.subject.empty()) read_field(j, "sequence", cfg.subject);
    read_field(j, "ideal", cfg.ideal);
    read_field(j, "horizon", cfg.horizon);
    read_field(j, "trials", cfg.trials);
    read_field(j, "points", cfg.points);
    read_field(j, "seed", cfg.seed);
    read_field(j, "eps_min", cfg.eps_min);
    read_field(j, "sampler", cfg.sampler);
    read_field(j, "construct_target", cfg.construct_target);
    unsigned workers = cfg.workers;
    read_field(j, "workers", workers);
    cfg.workers = workers;
    read_field(j, "out_dir", cfg.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config: " + path);
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  try {
    if (ext == "toml") return config_from_json(parse_toml_subset(in));
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("config parse: ") + e.what());
  }
}

ExperimentConfig config_from_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open manifest: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("manifest parse: ") + e.what());
  }
  if (!j.contains("config")) throw config_error("manifest: missing config block");
  ExperimentConfig cfg = config_from_json(j["config"]);
  if (j.contains("workers")) cfg.workers = j["workers"].get<unsigned>();
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  return cfg;
}

}  // namespace iclab
