#include "sobolab/errors.hpp"
#include "sobolab/manifold.hpp"

#include "format.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace sobolab {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DomainError("model spec: '" + key + "' expects a number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw DomainError("model spec: '" + key + "' expects an integer, got '" + value + "'");
  }
  return v;
}

std::vector<double> parse_lengths(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, 'x')) out.push_back(parse_double("L", item));
  if (out.empty()) throw DomainError("model spec: empty side lengths");
  return out;
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw DomainError("model spec: expected key=value, got '" + item + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  ModelSpec spec;
  if (auto s = take("scale")) spec.scale = parse_double("scale", *s);

  if (kind == "torus" || kind == "box") {
    int n = 2;
    int res = 16;
    std::vector<double> sides{1.0};
    if (auto v = take("n")) n = parse_int("n", *v);
    if (auto v = take("res")) res = parse_int("res", *v);
    if (auto v = take("L")) sides = parse_lengths(*v);
    if (kind == "torus") {
      spec.variant = FlatTorus{n, sides, res};
    } else {
      spec.variant = NeumannBox{n, sides, res};
    }
  } else if (kind == "sphere") {
    RoundSphere2 s;
    if (auto v = take("r")) s.radius = parse_double("r", *v);
    if (auto v = take("subdiv")) s.subdivision_level = parse_int("subdiv", *v);
    spec.variant = s;
  } else {
    throw DomainError("model spec: unknown model kind '" + kind + "' (torus, sphere, box)");
  }
  if (!kv.empty()) throw DomainError("model spec: unknown key '" + kv.begin()->first + "'");
  return spec;
}

std::string to_string(const ModelSpec& spec) {
  using detail::shortest;
  std::ostringstream out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RoundSphere2>) {
          out << "sphere:r=" << shortest(v.radius) << ",subdiv=" << v.subdivision_level;
        } else {
          out << (std::is_same_v<T, FlatTorus> ? "torus" : "box") << ":n=" << v.n
              << ",res=" << v.resolution << ",L=";
          for (std::size_t i = 0; i < v.side_lengths.size(); ++i) {
            out << (i ? "x" : "") << shortest(v.side_lengths[i]);
          }
        }
      },
      spec.variant);
  if (spec.scale != 1.0) out << ",scale=" << shortest(spec.scale);
  return out.str();
}

}  // namespace sobolab
