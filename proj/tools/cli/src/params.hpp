#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sobolab::cli {

using nlohmann::json;

enum class ParamType { Number, Integer, Seed, Text, NumberList, Flag };

struct Param {
  std::string name;
  ParamType type = ParamType::Number;
  json fallback;  // null: no default
  std::string help;
  bool required = false;
};

/// Normalizes one value from the command line (string) or the config file.
json convert_param(const Param& param, const json& raw);

/// Defaults, then the config document, then explicit flags.
json resolve_config(const std::vector<Param>& params, const json& file_config,
                    const std::map<std::string, std::string>& flags);

json json_number(double v);
double number_from_json(const json& v);

bool has(const json& cfg, const std::string& key);
double number(const json& cfg, const std::string& key);
std::optional<double> maybe_number(const json& cfg, const std::string& key);
long long integer(const json& cfg, const std::string& key);
std::string text(const json& cfg, const std::string& key);
std::vector<double> numbers(const json& cfg, const std::string& key);
bool flag(const json& cfg, const std::string& key);

struct Artifact {
  std::string kind;   // e.g. "trajectory", "fit"
  std::string ext;    // csv | svg
  std::string content;
};

struct CommandOutput {
  json result = json::object();
  int violations = 0;
  std::vector<Artifact> artifacts;
};

struct RunContext {
  std::filesystem::path out_dir;
};

}  // namespace sobolab::cli
