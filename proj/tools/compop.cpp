// Command-line front end: one subcommand per experiment family plus named presets.
//
//   compop <symbol|levelset|spectrum|criteria|capacity> --config run.json [--seed N] [--out DIR]
//   compop preset --name arc-capacity [--seed N] [--out DIR] [--print-config]
//
// Exit status: 0 success, 2 some verdict inconclusive, 1 error.

#include <CLI11.hpp>

#include <iostream>

#include "compop/errors.hpp"
#include "compop/experiment.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Monte Carlo seed (overrides the config)");
  sub->add_option("--out", c.out, "Output directory (overrides the config)");
}

int run(const std::string& command, compop::ExperimentConfig cfg, const Common& c) {
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.output = *c.out;
  const auto r = compop::run_experiment(command, cfg, cfg.output);
  std::cout << r.summary << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composition operators with outer symbols: experiments"};
  app.require_subcommand(1);

  Common common;
  std::string preset_name;
  bool print_config = false, list = false;

  for (const auto& name : compop::subcommands()) {
    if (name == "preset") continue;
    auto* sub = app.add_subcommand(name, "Run a " + name + " experiment from a JSON config");
    sub->add_option("--config", common.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    add_common(sub, common);
  }
  auto* pre = app.add_subcommand("preset", "Run a named reproduction preset");
  pre->add_option("--name", preset_name, "Preset name")->check(CLI::IsMember(compop::preset_names()));
  pre->add_flag("--print-config", print_config, "Print the preset's config and exit");
  pre->add_flag("--list", list, "List preset names and exit");
  add_common(pre, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (pre->parsed()) {
      if (list) {
        for (const auto& n : compop::preset_names()) std::cout << n << "\n";
        return 0;
      }
      if (preset_name.empty()) throw CLI::RequiredError("--name");
      const auto p = compop::preset(preset_name);
      if (print_config) {
        std::cerr << "subcommand: " << p.command << "\n";
        std::cout << compop::to_json(p.config).dump(2) << "\n";
        return 0;
      }
      return run(p.command, p.config, common);
    }
    for (auto* sub : app.get_subcommands())
      return run(sub->get_name(), compop::load_config(common.config), common);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const compop::Error& e) {
    std::cerr << "error [" << compop::to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
