#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lindyn/constructions.hpp"
#include "lindyn/synthesis.hpp"

namespace lindyn {

// Scriptable exit codes shared by every subcommand.
enum ExitCode : int {
  exit_ok = 0,
  exit_verification_failed = 1,
  exit_config_error = 2,
  exit_io_error = 3,
};

struct RunConfig {
  std::size_t m = 2;
  Rational lambda = Rational(2);
  std::size_t target_count = 10;
  std::size_t grid_dim = 4;
  std::vector<Rational> grid_coords = default_grid_coords();
  Rational epsilon_base = Rational(1, 2);
  std::optional<std::size_t> horizon_override;
  std::uint64_t seed = 0;
  std::string output_path;

  static std::vector<Rational> default_grid_coords();  // {-1, -1/2, 0, 1/2, 1}
  GridSpec grid() const { return GridSpec{grid_dim, grid_coords}; }
  void validate() const;  // throws InvalidInput on out-of-bounds fields
};

// Values present in the config file override the corresponding flags.
RunConfig apply_config_file(RunConfig base, const std::string& path);

// Seeded fixture generation for the dual pipeline: functionals with small
// support straddling the grid range, deterministic for a given seed.
std::vector<SparseFunctional> seeded_functionals(std::uint64_t seed, std::size_t m,
                                                 std::size_t coord_range);

// Subcommand bodies. Each writes its report file, logs a human summary, and
// returns an ExitCode; exceptions are already mapped to codes by the time
// they return.
int run_synthesize(const RunConfig& config, std::ostream& log);
int run_construct(const RunConfig& config, bool dual, std::ostream& log);
int run_verify(const std::string& artifact_path, const RunConfig& config, std::ostream& log);

}  // namespace lindyn
