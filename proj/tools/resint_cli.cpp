#include "resint/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
  using namespace resint;
  CLI::App app{"Resonance interaction energy between two identical two-level atoms"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions opts;
  int workers = 0;

  for (Mode m : {Mode::Energy, Mode::Tensor, Mode::Coherence, Mode::Sweep, Mode::Scan, Mode::OracleCheck,
                 Mode::SlopeFit}) {
    auto *sub = app.add_subcommand(std::string(mode_name(m)));
    sub->add_option("--config", config_path, "JSON configuration document")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "CSV output path (overrides the document's output)");
    sub->add_option("--workers", workers, "Worker threads for sweeps, scans and oracle checks")
      ->check(CLI::PositiveNumber);
    sub->add_flag("--dimensionless", opts.dimensionless, "Report energies as dE * 4 pi r^3 / |d|^2");
  }

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    return app.exit(e) == 0 ? exit_code::ok : exit_code::invalid_config;
  }

  auto const mode = parse_mode(app.get_subcommands().front()->get_name());
  if (workers > 0) opts.workers = workers;

  RunConfig cfg;
  try {
    cfg = load_config(config_path, mode);
  } catch (ConfigError const &e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return exit_code::invalid_config;
  }
  return run(cfg, opts, std::cout, std::cerr);
}
