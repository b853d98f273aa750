#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripchoice/errors.hpp"

namespace tripchoice::cli {

/// Command-line flags that override config values.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> draws;
  std::optional<int> trip_cap;
  std::optional<int> workers;
  std::optional<std::filesystem::path> out;
};

struct ConfigIssue {
  std::string path;  ///< dotted key, e.g. "data.persons"
  std::string message;
};

/// Every problem found while validating a config, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

inline const std::vector<std::string> kCommands = {"pipeline", "estimate", "cv", "scenario", "synth", "report"};

/// Runs one subcommand. Returns the exit status; on failure a JSON error
/// record is written to `err` and, when the run directory exists, to
/// error.json inside it.
int run(const std::string& command, const std::optional<std::filesystem::path>& config,
        const Overrides& overrides, std::ostream& out, std::ostream& err);

/// {"status": "error", "command": ..., "kind": ..., "message": ..., "issues": [...]}
nlohmann::json error_record(const std::string& command, const std::string& kind, const std::string& message,
                            const std::vector<ConfigIssue>& issues = {});

/// 64-bit FNV-1a over the canonical dump of the effective config, as hex.
std::string config_hash(const nlohmann::json& effective_config);

/// Parses argv with subcommands and the shared flags, then calls run().
int main_entry(int argc, char** argv);

}  // namespace tripchoice::cli
