#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abcage/cli/config.hpp"

namespace abcage::cli {

/// Output of one subcommand before the metadata header is attached.
struct Artifact {
  std::string filename;
  std::string text;                           // CSV or edge list body
  std::optional<nlohmann::ordered_json> json;  // set for JSON outputs
};

/// Subcommands that run an experiment from a config.
const std::vector<std::string>& experiment_commands();

/// Runs `command` on `cfg`. Throws ConfigError when the config lacks what
/// the command needs and std::invalid_argument for an unknown command.
Artifact run_experiment(const std::string& command, const ExperimentConfig& cfg);

struct Metadata {
  std::string version;
  std::string command;
  std::string config_name;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string note;
  std::string generated;  // timestamp; always emitted last
};

/// Artifact text with "# key=value" header lines, or the JSON document with
/// a leading "meta" object.
std::string render(const Artifact& artifact, const Metadata& meta);

}  // namespace abcage::cli
