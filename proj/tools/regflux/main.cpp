#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include <regflux/error.hpp>

#include "regflux/scenario.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::size_t jobs = 0;
  bool verbose = false;
};

void add_common(CLI::App* sub, Flags& f, bool needs_config) {
  auto* opt = sub->add_option("--config", f.config, "scenario config (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--jobs", f.jobs, "worker threads (0: all cores)")->envname("REGFLUX_JOBS");
  sub->add_flag("--verbose", f.verbose, "progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  using regflux::cli::Command;
  CLI::App app{"regflux: vanishing-viscosity solvers for conservation laws with regulated flux"};
  app.require_subcommand(1);
  Flags flags;

  const std::vector<std::pair<std::string, Command>> commands = {
      {"solve", Command::Solve},           {"sweep", Command::Sweep}, {"extract", Command::Extract},
      {"triangular", Command::Triangular}, {"check", Command::Check}};
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name, "run a " + name + " scenario");
    add_common(sub, flags, true);
    subs.emplace_back(sub, cmd);
  }
  auto* demo = app.add_subcommand("demo", "run the shipped scenarios");
  add_common(demo, flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    regflux::cli::RunOptions opts;
    opts.jobs = flags.jobs;
    opts.verbose = flags.verbose;
    regflux::cli::RunOutcome outcome;
    if (demo->parsed()) {
      opts.out = flags.out.value_or("regflux_demo");
      outcome = regflux::cli::run_demo(opts);
    } else {
      auto config = regflux::cli::load_config(flags.config);
      // "output" in the config is the fallback for --out.
      if (flags.out) {
        opts.out = *flags.out;
      } else if (config.is_object() && config.contains("output") && config["output"].is_string()) {
        opts.out = config["output"].get<std::string>();
      }
      for (const auto& [sub, cmd] : subs) {
        if (sub->parsed()) outcome = regflux::cli::run_command(cmd, config, opts);
      }
    }
    for (const auto& f : outcome.failures) std::cerr << "check failed: " << f << '\n';
    std::cout << (outcome.exit_code == 0 ? "all checks passed" : "some checks failed") << " (" << opts.out.string()
              << ")\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
