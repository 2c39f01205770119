#include "params.hpp"

#include "sobolab/cli.hpp"
#include "sobolab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sobolab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw DomainError("expected a number, got '" + raw + "'");
  return v;
}

long long parse_integer(const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("expected an integer, got '" + raw + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s[0] != '-') v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("seed must be a non-negative integer, got '" + raw + "'");
  return v;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number(item));
    if (parts.size() != 3) throw DomainError("range must be start:stop:step, got '" + text + "'");
    const double start = parts[0];
    const double stop = parts[1];
    const double step = parts[2];
    if (!(step > 0.0) || stop < start) throw DomainError("range needs step > 0 and stop >= start: '" + text + "'");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long long k = 0; k < count; ++k) {
      // Strip the accumulated binary noise (0.30000000000000004 -> 0.3).
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(k) * step);
      out.push_back(std::stod(buf));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(item));
  }
  if (out.empty()) throw DomainError("empty number list");
  return out;
}

json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

double number_from_json(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  throw DomainError("expected a number in config, got " + v.dump());
}

json convert_param(const Param& param, const json& raw) {
  try {
    switch (param.type) {
      case ParamType::Number:
        return json_number(number_from_json(raw));
      case ParamType::Integer:
        if (raw.is_number_integer()) return raw.get<long long>();
        if (raw.is_string()) return parse_integer(raw.get<std::string>());
        break;
      case ParamType::Seed:
        if (raw.is_number_unsigned()) return raw.get<std::uint64_t>();
        if (raw.is_number_integer() && raw.get<long long>() >= 0) return raw.get<std::uint64_t>();
        if (raw.is_string()) return parse_seed(raw.get<std::string>());
        break;
      case ParamType::Text:
        if (raw.is_string()) return raw;
        break;
      case ParamType::NumberList: {
        json out = json::array();
        if (raw.is_string()) {
          for (double v : parse_number_list(raw.get<std::string>())) out.push_back(json_number(v));
          return out;
        }
        if (raw.is_array()) {
          for (const auto& v : raw) out.push_back(json_number(number_from_json(v)));
          return out;
        }
        if (raw.is_number()) return json::array({raw});
        break;
      }
      case ParamType::Flag:
        if (raw.is_boolean()) return raw;
        if (raw.is_string()) {
          const auto s = raw.get<std::string>();
          if (s == "true" || s == "1" || s.empty()) return true;
          if (s == "false" || s == "0") return false;
        }
        break;
    }
  } catch (const DomainError& e) {
    throw DomainError("--" + param.name + ": " + e.what());
  }
  throw DomainError("--" + param.name + ": unsupported value " + raw.dump());
}

json resolve_config(const std::vector<Param>& params, const json& file_config,
                    const std::map<std::string, std::string>& flags) {
  json cfg = json::object();
  for (const auto& [key, value] : file_config.items()) {
    bool known = false;
    for (const auto& p : params) known = known || p.name == key;
    if (!known) throw DomainError("config: unknown key '" + key + "' for this command");
  }
  for (const auto& p : params) {
    if (const auto it = flags.find(p.name); it != flags.end()) {
      cfg[p.name] = convert_param(p, it->second);
    } else if (file_config.contains(p.name)) {
      cfg[p.name] = convert_param(p, file_config.at(p.name));
    } else if (!p.fallback.is_null()) {
      cfg[p.name] = convert_param(p, p.fallback);
    } else if (p.required) {
      throw DomainError("missing required parameter --" + p.name);
    }
  }
  return cfg;
}

bool has(const json& cfg, const std::string& key) { return cfg.contains(key) && !cfg.at(key).is_null(); }

double number(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) throw DomainError("missing parameter --" + key);
  return number_from_json(cfg.at(key));
}

std::optional<double> maybe_number(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) return std::nullopt;
  return number_from_json(cfg.at(key));
}

long long integer(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) throw DomainError("missing parameter --" + key);
  return cfg.at(key).get<long long>();
}

std::string text(const json& cfg, const std::string& key) {
  if (!has(cfg, key)) throw DomainError("missing parameter --" + key);
  return cfg.at(key).get<std::string>();
}

std::vector<double> numbers(const json& cfg, const std::string& key) {
  std::vector<double> out;
  if (!has(cfg, key)) return out;
  for (const auto& v : cfg.at(key)) out.push_back(number_from_json(v));
  return out;
}

bool flag(const json& cfg, const std::string& key) { return has(cfg, key) && cfg.at(key).get<bool>(); }

}  // namespace sobolab::cli
