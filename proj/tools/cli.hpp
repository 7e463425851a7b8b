#pragma once

// Command-line front end: argument parsing into a RunConfig and dispatch.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "susyqm/params.hpp"

namespace susyqm::cli {

enum class Command {
  Solve,
  Partner,
  Hierarchy,
  SiCheck,
  Spectrum,
  Wavefunctions,
  Classify,
  AlgebraCheck,
  Catalog
};
enum class InputKind { None, Catalog, Expression, Tabulated };
enum class Format { Csv, Json };

const char* to_string(Command c);

struct RunConfig {
  Command command = Command::Catalog;
  InputKind input_kind = InputKind::None;
  std::string input;  // record name, expression text or CSV path
  ParamMap params;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<int> points;
  int levels = 4;
  int depth = 3;
  std::optional<std::string> transform;  // translation, scaling, power, projective
  std::optional<double> alpha;
  std::optional<double> q;
  std::optional<double> p;
  std::optional<std::string> transform_param;
  std::optional<double> tol;
  std::optional<std::string> output;
  Format format = Format::Csv;
  std::optional<std::string> fig;
  int budget = 2;
  bool dump_config = false;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// args excludes the program name. Throws UsageError or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

/// Resolved settings as JSON text.
std::string config_json(const RunConfig& config);

/// Runs the command, writing the primary output to `out` unless an output
/// path is set. Library errors propagate as susyqm::Error.
int run(const RunConfig& config, std::ostream& out);

/// parse_args + run with exit-code mapping and messages on `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count from SUSY_SPECTRA_THREADS (at least 1).
int thread_limit();

}  // namespace susyqm::cli
