#include "abcage/cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "abcage/cli/config.hpp"
#include "abcage/cli/experiment.hpp"
#include "abcage/cli/presets.hpp"

namespace abcage::cli {

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ExperimentConfig load(const Options& opt) {
  if (!opt.config_path.empty() && !opt.preset.empty()) throw ConfigError(0, "give either --config or --preset");
  if (!opt.preset.empty()) {
    try {
      return parse_config(find_preset(opt.preset).yaml);
    } catch (const std::out_of_range& e) {
      throw ConfigError(0, e.what());
    }
  }
  if (opt.config_path.empty()) throw ConfigError(0, "--config or --preset is required");
  return load_config(opt.config_path);
}

class OutputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

int execute(std::string command, const Options& opt, std::ostream& out) {
  auto cfg = load(opt);
  if (command.empty()) {
    if (cfg.command.empty()) throw ConfigError(0, "config has no command; pass a subcommand instead of run");
    command = cfg.command;
  }
  if (opt.seed) cfg.readout.seed = *opt.seed;
  const auto artifact = run_experiment(command, cfg);

  Metadata meta;
  meta.version = kVersion;
  meta.command = command;
  meta.config_name = cfg.name;
  meta.config_hash = config_hash(cfg.source);
  meta.seed = cfg.readout.seed;
  meta.note = cfg.note;
  meta.generated = timestamp();

  const std::filesystem::path dir = opt.output_dir.empty() ? cfg.output_dir : opt.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / artifact.filename;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw OutputError("cannot write " + path.string());
  file << render(artifact, meta);
  file.close();
  if (!file) throw OutputError("failed writing " + path.string());
  out << path.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aharonov-Bohm caging simulator for Bose-Hubbard plaquettes"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options opt;
  std::string command;
  std::string preset_name;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "experiment config (YAML)");
    sub->add_option("--preset", opt.preset, "built-in figure preset");
    sub->add_option("--output", opt.output_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", opt.seed, "readout sampling seed (overrides readout.seed)");
  };

  for (const auto& name : experiment_commands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    add_common(sub);
    sub->callback([&command, name] { command = name; });
  }
  auto* run = app.add_subcommand("run", "run the command named in the config");
  add_common(run);
  auto* list = app.add_subcommand("presets", "list built-in presets");
  auto* show = app.add_subcommand("show-preset", "print a preset's config");
  show->add_option("name", preset_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& p : presets()) out << p.name << "  " << p.summary << '\n';
      return 0;
    }
    if (show->parsed()) {
      out << find_preset(preset_name).yaml;
      return 0;
    }
    return execute(run->parsed() ? std::string() : command, opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace abcage::cli
