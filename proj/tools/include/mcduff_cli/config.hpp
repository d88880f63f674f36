#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcduff::cli {

/// Malformed or inconsistent configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string name;
  std::string fallback;  // empty and required = no default
  bool required = false;
  std::string help;
};

/// Subcommands that produce a certificate, with their parameter keys.
const std::map<std::string, std::vector<KeySpec>>& schema();
bool is_runnable(std::string_view subcommand);

struct RunConfig {
  std::string subcommand;
  /// Keys set explicitly for the subcommand (or for sweep's target).
  std::map<std::string, std::string> params;
  std::string output = "-";
  std::string format = "json";
  std::uint64_t seed = 1;
  long precision_bits = 65536;

  // sweep only
  std::string target;
  std::vector<std::pair<std::string, std::string>> grid;  // key -> value spec

  /// Explicit value or schema default; throws ConfigError for unknown keys
  /// or missing required ones.
  std::string get(const std::string& key) const;
  bool has(const std::string& key) const { return params.contains(key); }
  /// The subcommand whose parameters live in `params`.
  const std::string& driver() const { return subcommand == "sweep" ? target : subcommand; }

  void validate() const;
  std::string serialize() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Flat "key = value" lines under [run], [<subcommand>] and [sweep]
/// headers; '#' starts a comment. Unknown sections or keys are rejected.
RunConfig parse_config(std::string_view text);

/// "a:b:step" (integers or rationals, inclusive) or a comma list.
std::vector<std::string> expand_values(std::string_view spec);

/// Splits on `sep`, trimming blanks and dropping empty pieces.
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace mcduff::cli
