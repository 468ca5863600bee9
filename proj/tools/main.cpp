#include <iostream>

#include <CLI11.hpp>

#include "zipperlab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"zipperlab: numerical laboratory for random scattering zippers"};
  app.require_subcommand(1);

  zipperlab::RunConfig config;

  auto add_common = [&config](CLI::App* cmd) {
    cmd->add_option("--L", config.L, "channel half-count L");
    cmd->add_option("--alpha", config.alpha_source,
                    "Verblunsky coefficient: scalar a (alpha = a*I) or JSON matrix file");
    cmd->add_option("--seed", config.master_seed, "master seed");
    cmd->add_option("--out", config.output_dir,
                    "output directory (default $ZIPPERLAB_OUTDIR or ./zipperlab_out)");
    cmd->add_option("--threads", config.threads, "worker threads, 0 = all cores");
    cmd->add_flag("--force", config.force, "overwrite an existing run directory");
  };

  CLI::App* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum at a single z");
  add_common(lyap);
  lyap->add_option("--z", config.z_spec, "spectral parameter, 're' or 're,im' on the circle");
  lyap->add_option("--steps", config.n_steps, "cocycle steps per realization");
  lyap->add_option("--realizations", config.n_realizations, "independent realizations");
  lyap->add_option("--format", config.format, "csv (default) or json for extra results.json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* sweep = app.add_subcommand("sweep", "Lyapunov spectra over a z grid");
  add_common(sweep);
  sweep->add_option("--z-grid", config.z_grid, "evaluate at the N-th roots of unity")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--steps", config.n_steps, "cocycle steps per realization");
  sweep->add_option("--realizations", config.n_realizations, "independent realizations");
  sweep->add_option("--format", config.format, "csv (default) or json for extra results.json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* lie = app.add_subcommand("lie-check", "bracket-closure certification");
  add_common(lie);
  lie->add_option("--z", config.z_spec, "spectral parameter");
  lie->add_option("--z-grid", config.z_grid, "certify at the N-th roots of unity");
  lie->add_option("--max-rounds", config.max_rounds, "bracket rounds before giving up");

  CLI::App* spectrum = app.add_subcommand("spectrum", "finite truncation diagnostics");
  add_common(spectrum);
  spectrum->add_option("--blocks", config.n_blocks, "number of scattering events (even, >= 4)");

  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suite at small sizes");
  selftest->add_option("--threads", config.threads, "worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return zipperlab::kExitConfigError;
  }

  config.command = app.get_subcommands().front()->get_name();
  return zipperlab::run(config, std::cout, std::cerr);
}
