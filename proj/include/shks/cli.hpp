#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shks/config.hpp"
#include "shks/montecarlo.hpp"

namespace shks::cli {

/// Flat dotted key -> value text.
using ConfigMap = std::map<std::string, std::string>;

/// Parses "key = value" lines; '#' starts a comment.  Duplicate keys are
/// an error naming the line.
ConfigMap parse_config_text(std::string_view text, const std::string& source = "config");
ConfigMap read_config_file(const std::filesystem::path& path);

/// Parses "key=value" (the --set flag).
std::pair<std::string, std::string> parse_assignment(const std::string& text);

/// Solver configuration plus the experiment-level settings that shape it.
struct ExperimentConfig {
  SolverConfig solver;
  /// Initial condition as written, before any data_fraction rescaling.
  InitialCondition declared_initial = SingleModeInitial{};
  std::optional<TheoryParams> theory;
  /// Initial H^s norm as a fraction of the small-data bound (linear noise).
  std::optional<double> data_fraction;
  /// stop_threshold was given as "proof_level".
  bool stop_at_proof_level = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Finite decimal number; ConfigError naming `key` otherwise.
double parse_number(const std::string& key, const std::string& text);

/// Every key the resolver understands.
const std::vector<std::string>& known_keys();

/// Applies defaults, validates, and resolves derived settings.  Unknown keys
/// and invalid values raise ConfigError naming the key(s).
ExperimentConfig resolve_config(const ConfigMap& values);

/// Keys that reproduce `cfg` under resolve_config.
ConfigMap config_echo(const ExperimentConfig& cfg);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Writes via a temporary file in the same directory and a rename, so the
/// destination never holds partial content.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Entry point of the command-line tool; returns the exit status
/// (0 success, 2 configuration error, 3 study abort, 1 anything else).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shks::cli
