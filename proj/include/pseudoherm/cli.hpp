#pragma once

// Command-line front end: argument parsing, config files and dispatch.

#include <iosfwd>
#include <string>
#include <vector>

#include "pseudoherm/errors.hpp"

namespace pseudoherm {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::string help_text;  // set when --help was requested

  std::string family = "ho";  // ho | swanson | ao
  int n = 3;
  int m = 2;
  int order = 2;
  int N = 128;
  int upto = 12;
  int level = 0;
  int n_from = 15;
  int n_to = 16;

  double g = 0.04;
  double alpha = 1.0;
  double E0 = 0.003;
  double omega = 1.0;
  double omega_min = 0.9;
  double omega_max = 1.3;
  int omega_steps = 0;  // 0: grid step 2 pi / tau
  double tau = 500.0;
  double dt = 0.05;
  double t_step = 2.5;
  double x_min = -6.0;
  double x_max = 6.0;
  int points = 241;

  std::string member = "hermitian";
  std::string gauge = "length";
  std::string envelope = "constant";
  std::string mode = "std";
  std::string method = "first-order";
  std::string out;
  std::string config_path;
};

/// Arguments without the program name. Throws Error(UsageError).
RunConfig parse_args(const std::vector<std::string>& args);

/// Dispatches a validated config; returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// 0 ok, 2 usage or precondition violation, 3 numerical or module failure.
int exit_code_for(ErrorKind kind);

/// parse_args + run with error reporting; used by main().
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parameters of a config as ordered key/value pairs (recorded in output metadata).
std::vector<std::pair<std::string, std::string>> config_metadata(const RunConfig& config);

}  // namespace pseudoherm
