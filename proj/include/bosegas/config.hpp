#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bosegas::cli {

enum class ParamType { real, integer, text };

enum class Constraint { none, positive, nonnegative, at_least_one };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::real;
  std::string fallback;  ///< default as text; empty means "unset"
  Constraint constraint = Constraint::none;
  std::vector<std::string> choices;  ///< allowed values for text parameters
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<ParamSpec> params;
};

/// Parameters of every subcommand, shared by the command line and config files.
const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(const std::string& name);

/// lo:hi:n[:lin|:log] for variable `var` (log spacing by default).
struct Sweep {
  std::string var;
  double lo = 0;
  double hi = 0;
  int n = 0;
  bool log = true;
  std::vector<double> values() const;
};

/// Parses "var=lo:hi:n[:lin|:log]"; throws ConfigError with the field path.
Sweep parse_sweep(const std::string& text, const std::string& field = "sweep");

using Section = std::map<std::string, std::string>;
using ConfigFile = std::map<std::string, Section>;

/// Sectioned key = value file ("[section]" headers, ';' or '#' comments).
/// Throws IoError when unreadable and ConfigError when malformed.
ConfigFile load_config_file(const std::string& path);

struct Diagnostic {
  std::string field;  ///< section.key
  std::string message;
  bool error = true;  ///< false for warnings
};

/// Checks one section against its command spec, including cross-field rules.
std::vector<Diagnostic> validate_section(const std::string& section, const Section& values);

/// Checks a whole file: unknown sections, the [run] section and every command section.
std::vector<Diagnostic> validate_config(const ConfigFile& cfg);

struct RunConfig {
  std::string subcommand;
  Section params;  ///< resolved values: defaults, then config file, then command line
  std::optional<Sweep> sweep;
  std::string out;
  std::uint64_t seed = 20240607;
  std::string schema_version = "1.0";

  bool has(const std::string& key) const;
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::optional<double> optional_real(const std::string& key) const;
};

/// Defaults of a subcommand as a section.
Section default_section(const std::string& command);

/// Throws ConfigError listing every error diagnostic.
void throw_on_errors(const std::vector<Diagnostic>& diags);

std::string format_diagnostic(const Diagnostic& d);

}  // namespace bosegas::cli
