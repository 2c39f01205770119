#include "sobolab/cli.hpp"

#include "commands.hpp"

#include "sobolab/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sobolab::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("SOBOLAB_OUT"); env != nullptr && *env != '\0') return env;
  return "sobolab-out";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Artifacts are named by their content hash; an existing file of that name
// must already hold the same bytes.
std::string store(const std::filesystem::path& dir, const std::string& stem, const std::string& ext,
                  const std::string& content, std::ostream& err) {
  const std::string name = stem + "-" + hex64(fnv1a(content)) + "." + ext;
  const auto path = dir / name;
  if (std::filesystem::exists(path)) {
    if (read_file(path) != content) throw GuardError("refusing to overwrite " + path.string());
    err << "unchanged " << path.string() << '\n';
    return name;
  }
  std::filesystem::create_directories(dir);
  std::ofstream o(path, std::ios::binary);
  if (!o) throw GuardError("cannot write " + path.string());
  o << content;
  if (!o) throw GuardError("failed writing " + path.string());
  err << "wrote " << path.string() << '\n';
  return name;
}

bool wants(const std::string& formats, const std::string& ext) {
  std::stringstream ss(formats);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == ext) return true;
  }
  return false;
}

const char* kind_of(const std::exception& e) {
  if (dynamic_cast<const GuardError*>(&e) != nullptr) return "guard";
  if (dynamic_cast<const HypothesisError*>(&e) != nullptr) return "hypothesis";
  if (dynamic_cast<const SingularOperatorError*>(&e) != nullptr) return "singular operator";
  if (dynamic_cast<const DomainError*>(&e) != nullptr) return "invalid input";
  return "error";
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& c : commands()) out.push_back(c.name);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sobolab: Sobolev constants on discretized manifolds", "sobolab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Bound {
    const CommandDef* def = nullptr;
    CLI::App* sub = nullptr;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;
    std::string out_dir;
    std::string formats = "json,csv,svg";
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& def : commands()) {
    auto b = std::make_unique<Bound>();
    b->def = &def;
    b->sub = app.add_subcommand(def.name, def.help);
    b->sub->add_option("--config", b->config_path, "JSON config; flags override its keys");
    b->sub->add_option("--out", b->out_dir, "output directory (default $SOBOLAB_OUT or ./sobolab-out)");
    b->sub->add_option("--formats", b->formats, "artifact formats among json,csv,svg");
    for (const auto& p : def.params) {
      const std::string flag_name = "--" + p.name;
      if (p.type == ParamType::Flag) {
        b->options[p.name] = b->sub->add_flag(flag_name, p.help);
      } else {
        b->options[p.name] = b->sub->add_option(flag_name, b->values[p.name], p.help);
      }
    }
    bound.push_back(std::move(b));
  }

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
    const auto names = command_names();
    if (std::find(names.begin(), names.end(), args.front()) == names.end()) {
      err << "sobolab: unknown command '" << args.front() << "' (known:";
      for (const auto& n : names) err << ' ' << n;
      err << ")\n";
      return kExitError;
    }
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  Bound* chosen = nullptr;
  for (const auto& b : bound) {
    if (b->sub->parsed()) chosen = b.get();
  }
  if (chosen == nullptr) {
    err << "sobolab: no command given\n";
    return kExitError;
  }
  const CommandDef& def = *chosen->def;

  try {
    json file_config = json::object();
    if (!chosen->config_path.empty()) {
      file_config = json::parse(read_file(chosen->config_path));
      if (!file_config.is_object()) throw DomainError("config must be a JSON object");
    }
    std::map<std::string, std::string> flags;
    for (const auto& p : def.params) {
      const CLI::Option* opt = chosen->options.at(p.name);
      if (opt->count() == 0) continue;
      flags[p.name] = p.type == ParamType::Flag ? "true" : chosen->values.at(p.name);
    }
    json cfg = resolve_config(def.params, file_config, flags);
    const RunContext ctx{chosen->out_dir.empty() ? default_out_dir() : std::filesystem::path(chosen->out_dir)};

    CommandOutput result = def.body(cfg, ctx);

    json config_doc = {{"command", def.name}, {"parameters", cfg}};
    const std::string config_hash = hex64(fnv1a(config_doc.dump()));
    json report = {{"command", def.name},
                   {"version", kVersion},
                   {"config", cfg},
                   {"config_hash", config_hash},
                   {"seed", cfg.contains("seed") ? cfg.at("seed") : json(nullptr)},
                   {"violations", result.violations},
                   {"result", result.result}};
    json artifacts = json::object();
    for (const auto& a : result.artifacts) {
      if (!wants(chosen->formats, a.ext)) continue;
      artifacts[a.kind + "." + a.ext] = store(ctx.out_dir, a.kind == def.name ? def.name : def.name + "-" + a.kind, a.ext, a.content, err);
    }
    report["artifacts"] = artifacts;
    const std::string text = report.dump(2) + "\n";
    if (wants(chosen->formats, "json")) store(ctx.out_dir, def.name, "json", text, err);
    out << text;
    return result.violations > 0 ? kExitViolations : kExitOk;
  } catch (const std::exception& e) {
    err << "sobolab " << def.name << ": " << kind_of(e) << ": " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace sobolab::cli
