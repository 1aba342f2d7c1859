#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "slowent/cli.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Slow entropy of commuting toral automorphisms"};
  app.set_version_flag("--version", slowent::kVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config;
  slowent::Overrides overrides;
  app.add_option("-c,--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", overrides.seed, "random seed");
  app.add_option("--samples", overrides.samples, "Monte Carlo samples per window");
  app.add_option("--eps", overrides.eps, "Bowen ball radius");
  app.add_option("--out", overrides.out, "output directory");
  app.add_option("--format", overrides.formats, "output formats (json,csv,svg)")->delimiter(',');

  for (const char *name : {"verify", "spectrum", "chambers", "entropy", "minimize",
                           "estimate-bowen", "estimate-cover", "report"}) {
    app.add_subcommand(name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ConfigParse " << e.what() << '\n';
    return 1;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  return slowent::run(sub, config, overrides, std::cout, std::cerr);
}
