#pragma once

#include "params.hpp"

#include <functional>

namespace sobolab::cli {

struct CommandDef {
  std::string name;
  std::string help;
  std::vector<Param> params;
  bool uses_ensemble = false;
  std::function<CommandOutput(json& cfg, const RunContext& ctx)> body;
};

const std::vector<CommandDef>& commands();

}  // namespace sobolab::cli
