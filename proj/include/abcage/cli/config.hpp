#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcage/caging.hpp"
#include "abcage/dynamics.hpp"
#include "abcage/fock_basis.hpp"
#include "abcage/lattice.hpp"
#include "abcage/measurement.hpp"

namespace abcage::cli {

/// Invalid configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

enum class EvolutionMode { Unitary, Lindblad };

struct BandsConfig {
  double flux = 0.0;  // radians
  double t = 0.0;     // rad/us
  int k_points = 201;
};

struct CagingConfig {
  CagingMode mode = CagingMode::HardcoreLimit;
  int max_particles = 5;
  std::vector<int> conjecture_n;
};

/// A fully resolved experiment. Frequencies are already in rad/us.
struct ExperimentConfig {
  std::string name;
  std::string command;  // default subcommand for `run`
  std::string note;     // copied into output metadata
  LatticeSpec lattice{{SiteParams{}}, {}};
  std::optional<int> max_occ;
  int n_particles = 1;
  FockState initial_state;
  double t_max_us = 0.0;
  int n_times = 401;
  EvolutionMode mode = EvolutionMode::Unitary;
  ObservableSet observables{};
  std::optional<Partition> partition;  // graph restriction
  BandsConfig bands;
  CagingConfig caging;
  ReadoutParams readout;
  std::string output_dir = ".";
  /// Text the config was parsed from; hashed into output metadata.
  std::string source;
};

/// Parses a YAML experiment description. Throws ConfigError with the line of
/// the offending entry.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// 64-bit FNV-1a, hex encoded.
std::string config_hash(const std::string& text);

}  // namespace abcage::cli
