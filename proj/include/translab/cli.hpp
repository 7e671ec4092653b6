#ifndef TRANSLAB_CLI_HPP
#define TRANSLAB_CLI_HPP

#include <optional>
#include <string>
#include <vector>

namespace translab {

struct RunConfig {
  enum class Command { Solve, Bowl, Wing, MuRadial, Grim, Perron, Verify, Flux };
  Command command = Command::Solve;

  std::string domain_spec;  // inline ("disk:1.0") or a key=value file path
  std::string phi_text = "0";
  std::string phi_file;
  std::string f_text = "0";
  std::string mode = "strip";  // perron mode: strip | unbounded
  std::string suite = "all";
  std::string out;
  std::string grid_out;

  int n = 64;
  int steps = 10;
  int sample = 50;
  double tol = 1e-10;
  double t = 1.0;
  double mu = 0.0;
  double H = 0.5;
  double n_exp = 2.0;
  bool serrin = false;
  double m = 1.0;
  double L = 3.0;
  double theta = 0.0;
  double offset = 0.0;
  double r0 = 1.0;
  double R = 1.0;
  double step = 1e-3;
  double eps = 0.2;
  double xmin = -2.0, xmax = 2.0;
  double ymin = 0.0, ymax = 0.0;  // 0,0 means the maximal strip with a guard
  unsigned seed = 0;
};

struct ParsedArgs {
  std::optional<RunConfig> config;  // empty when help was requested
  std::string help_text;
};

// Throws Error(UsageError) naming the offending flag.
ParsedArgs parse_args(const std::vector<std::string>& argv);

// Executes a validated config. Returns 0, or 4 when a verification suite or
// the flux check fails. Solver errors propagate as translab::Error.
int run_config(const RunConfig& config);

// Full entry point: parses, dispatches, maps errors to exit codes
// (0 ok, 2 usage, 3 solver failure, 4 verification failure).
int cli_main(int argc, char** argv);

}  // namespace translab

#endif
