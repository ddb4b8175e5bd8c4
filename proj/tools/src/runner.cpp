#include "rmt_cli/runner.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>

#include "rmt/errors.hpp"
#include "rmt/version.hpp"
#include "rmt_cli/commands.hpp"
#include "rmt_cli/output.hpp"

namespace rmt::cli {
namespace {

std::vector<std::pair<std::string, std::string>> collect_parameters(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
    } else {
      value = opt->get_default_str();
    }
    out.emplace_back(name, value);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-n random-matrix gap probabilities: Fredholm determinants and anchored sigma-form integration",
               "rmt"};
  CommandContext ctx;
  int threads = 0;
  app.set_config("--config", "", "key-value config file; flags override it");
  app.add_flag("--check", ctx.check, "compare against the reference value and exit 4 on a breach");
  app.add_option("--threads", threads, "worker threads (default: RMT_THREADS or all cores)");
  app.require_subcommand(1, 1);
  app.fallthrough();
  register_commands(app, ctx);

  std::vector<std::string> reversed_args(args.rbegin(), args.rend());
  try {
    app.parse(reversed_args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitParameter;
  }
  if (threads < 0) {
    err << "error: --threads must be non-negative\n";
    return kExitParameter;
  }
  if (threads > 0) setenv("RMT_THREADS", std::to_string(threads).c_str(), 1);

  const CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    ctx.action(out);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::domain_error& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  RunManifest m;
  m.command = sub->get_name();
  m.parameters = collect_parameters(*sub);
  m.parameters.emplace_back("check", ctx.check ? "true" : "false");
  m.outputs = ctx.outputs;
  m.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.toolkit_version = kVersion;
  if (!ctx.outputs.empty()) {
    const std::string path = ctx.outputs.front() + ".manifest";
    write_manifest(path, m);
  }
  bool ok = true;
  for (const auto& c : ctx.checks) {
    out << "check: " << (c.passed ? "PASS " : "FAIL ") << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitCheck;
}

}  // namespace rmt::cli
