#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace rmt::cli {

struct CheckOutcome {
  bool passed = true;
  std::string detail;
};

struct CommandContext {
  bool check = false;
  std::vector<std::string> outputs;
  std::vector<CheckOutcome> checks;
  std::function<void(std::ostream&)> action;
};

// Adds the experiment subcommands; the selected one stores its action in ctx.
void register_commands(CLI::App& app, CommandContext& ctx);

}  // namespace rmt::cli
