#ifndef ZIPPERLAB_RUNNER_HPP
#define ZIPPERLAB_RUNNER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "zipperlab/haar.hpp"

namespace zipperlab {

/// Stable exit-code contract.
enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailure = 1,
  kExitConfigError = 2,
  kExitNumericFailure = 3,
  kExitCertificationMismatch = 4,
};

struct RunConfig {
  std::string command;  ///< lyapunov | sweep | lie-check | spectrum | selftest
  int L = 1;
  std::string alpha_source = "0.5";  ///< scalar literal or path to a JSON file
  std::string z_spec = "1";          ///< "re" or "re,im"
  int z_grid = 0;                    ///< when > 0: the z_grid-th roots of unity
  long n_steps = 100000;
  int n_realizations = 8;
  int n_blocks = 64;
  std::uint64_t master_seed = 1;
  std::string output_dir;  ///< empty: $ZIPPERLAB_OUTDIR, else "zipperlab_out"
  std::string format = "csv";
  int threads = 0;
  bool force = false;
  int max_rounds = 8;

  /// Resolves alpha_source to the coefficient matrix (scalar * identity or
  /// file contents); validates the contraction bound.
  Matrix resolve_alpha() const;

  /// Grid from z_grid (roots of unity) or the single z_spec point,
  /// renormalized onto the circle when within 1e-9, rejected otherwise.
  std::vector<Complex> resolve_grid() const;

  std::string resolve_output_dir() const;
};

/// Dispatches the configured command, writes the manifest plus result
/// files, and returns the exit code. Throws nothing: errors are mapped to
/// the exit-code contract and reported on err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct SelftestResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Full invariant suite at small sizes (L <= 3, steps <= 1e4).
std::vector<SelftestResult> selftest(int threads = 0);

/// Manifest echoing the config plus version, timestamp, convention notes
/// and derived per-task streams; sufficient to reproduce the run.
nlohmann::json make_manifest(const RunConfig& config);

extern const char* kToolVersion;

}  // namespace zipperlab

#endif
