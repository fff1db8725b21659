#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lindyn/driver.hpp"
#include "lindyn/errors.hpp"
#include "lindyn/rational.hpp"

namespace {

struct Flags {
  std::string m;
  std::string lambda;
  std::string targets;
  std::string grid_dim;
  std::string horizon;
  std::string seed;
  std::string out;
  std::string config;
};

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--m", flags.m, "tuple length (1..8)");
  cmd->add_option("--lambda", flags.lambda, "shift weight, rational with |lambda| >= 2");
  cmd->add_option("--targets", flags.targets, "number of enumerated target tuples");
  cmd->add_option("--grid-dim", flags.grid_dim, "grid support dimension");
  cmd->add_option("--horizon", flags.horizon, "audit horizon override");
  cmd->add_option("--seed", flags.seed, "seed for the dual fixture generator");
  cmd->add_option("--out", flags.out, "output file path");
  cmd->add_option("--config", flags.config, "JSON config file; its values override flags");
}

// Flag parsing happens before config-file overrides, so every numeric flag
// is validated here and folded into the config afterwards.
lindyn::RunConfig fold(const Flags& flags) {
  lindyn::RunConfig config;
  auto parse_size = [](const std::string& text, const char* name) {
    try {
      const long v = std::stol(text);
      if (v < 0) throw lindyn::InvalidInput(std::string("config: ") + name + " must be non-negative");
      return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw lindyn::InvalidInput(std::string("config: cannot parse ") + name);
    }
  };
  if (!flags.m.empty()) config.m = parse_size(flags.m, "--m");
  if (!flags.lambda.empty()) config.lambda = lindyn::Rational::from_string(flags.lambda);
  if (!flags.targets.empty()) config.target_count = parse_size(flags.targets, "--targets");
  if (!flags.grid_dim.empty()) config.grid_dim = parse_size(flags.grid_dim, "--grid-dim");
  if (!flags.horizon.empty()) config.horizon_override = parse_size(flags.horizon, "--horizon");
  if (!flags.seed.empty()) config.seed = parse_size(flags.seed, "--seed");
  if (!flags.out.empty()) config.output_path = flags.out;
  if (!flags.config.empty()) config = lindyn::apply_config_file(config, flags.config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact construction and certification of disjoint hypercyclic operator tuples"};
  app.require_subcommand(1);

  Flags flags;
  std::string artifact_path;
  CLI::App* synthesize = app.add_subcommand(
      "synthesize", "enumerate a target schedule and certify an orbit visiting it");
  add_common(synthesize, flags);
  CLI::App* construct =
      app.add_subcommand("construct", "build a conjugated tuple artifact over a schedule");
  add_common(construct, flags);
  bool dual = false;
  construct->add_flag("--dual", dual, "also transport a functional tuple (dual pipeline)");
  CLI::App* verify = app.add_subcommand("verify", "re-run all audits on a serialized artifact");
  verify->add_option("artifact", artifact_path, "artifact or certificate file")->required();
  add_common(verify, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lindyn::exit_config_error;
  }

  try {
    const lindyn::RunConfig config = fold(flags);
    if (synthesize->parsed()) return lindyn::run_synthesize(config, std::cout);
    if (construct->parsed()) return lindyn::run_construct(config, dual, std::cout);
    return lindyn::run_verify(artifact_path, config, std::cout);
  } catch (const lindyn::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lindyn::exit_config_error;
  } catch (const lindyn::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return lindyn::exit_io_error;
  }
}
