#include "abcage/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "abcage/units.hpp"

namespace abcage::cli {

ConfigError::ConfigError(int line, const std::string& msg)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

int line_of(const YAML::Node& n) {
  const auto mark = n.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  if (!map.IsMap()) throw ConfigError(line_of(map), where + ": expected a mapping");
  for (auto it = map.begin(); it != map.end(); ++it) {
    const auto key = it->first.as<std::string>();
    if (!allowed.count(key)) {
      throw ConfigError(line_of(it->first), "unknown key '" + key + "' in " + where);
    }
  }
}

double number(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(line_of(n), what + ": expected a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(line_of(n), what + ": expected a number, got '" + n.Scalar() + "'");
  }
}

long integer(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(line_of(n), what + ": expected an integer");
  try {
    return n.as<long>();
  } catch (const YAML::Exception&) {
    throw ConfigError(line_of(n), what + ": expected an integer, got '" + n.Scalar() + "'");
  }
}

std::string text(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(line_of(n), what + ": expected a string");
  return n.Scalar();
}

std::vector<double> numbers(const YAML::Node& n, const std::string& what) {
  if (n.IsScalar()) return {number(n, what)};
  if (!n.IsSequence()) throw ConfigError(line_of(n), what + ": expected a number or a list of numbers");
  std::vector<double> out;
  for (const auto& item : n) out.push_back(number(item, what));
  return out;
}

std::vector<int> integers(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) throw ConfigError(line_of(n), what + ": expected a list of integers");
  std::vector<int> out;
  for (const auto& item : n) out.push_back(static_cast<int>(integer(item, what)));
  return out;
}

/// Scalar broadcast to every site, or one value per site.
std::vector<double> per_site(const YAML::Node& n, int n_sites, const std::string& what) {
  auto v = numbers(n, what);
  if (v.size() == 1) return std::vector<double>(n_sites, v.front());
  if (static_cast<int>(v.size()) != n_sites) {
    throw ConfigError(line_of(n), what + ": expected 1 or " + std::to_string(n_sites) + " values");
  }
  return v;
}

double flux_value(const YAML::Node& n, const std::string& what) {
  const auto s = text(n, what);
  if (s == "pi") return std::numbers::pi;
  if (s == "zero" || s == "0") return 0.0;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError(line_of(n), what + ": expected pi, zero or a number of radians");
  }
}

Flux lattice_flux(const YAML::Node& n) {
  const auto s = text(n, "lattice.flux");
  if (s == "pi") return Flux::Pi;
  if (s == "zero" || s == "0") return Flux::Zero;
  throw ConfigError(line_of(n), "lattice.flux: expected pi or zero");
}

int site_ref(const YAML::Node& n, const std::vector<std::string>& labels, const std::string& what) {
  const auto s = text(n, what);
  auto it = std::find(labels.begin(), labels.end(), s);
  if (it != labels.end()) return static_cast<int>(it - labels.begin());
  try {
    std::size_t used = 0;
    const int i = std::stoi(s, &used);
    if (used == s.size() && i >= 0 && i < static_cast<int>(labels.size())) return i;
  } catch (const std::exception&) {
  }
  throw ConfigError(line_of(n), what + ": unknown site '" + s + "'");
}

LatticeSpec build_lattice(const YAML::Node& node, double& mean_t) {
  check_keys(node,
             {"preset", "flux", "plaquettes", "tunneling_mhz", "omega_mhz", "interaction_mhz", "max_occupancy", "sites",
              "bonds"},
             "lattice");
  if (!node["preset"]) throw ConfigError(line_of(node), "lattice.preset is required");
  const auto preset = text(node["preset"], "lattice.preset");
  const Flux flux = node["flux"] ? lattice_flux(node["flux"]) : Flux::Pi;

  std::vector<double> t_mhz;
  if (node["tunneling_mhz"]) t_mhz = numbers(node["tunneling_mhz"], "lattice.tunneling_mhz");

  LatticeSpec spec{{SiteParams{}}, {}};
  try {
    if (preset == "plaquette") {
      PlaquetteTunnelings t;
      if (t_mhz.size() == 1) {
        t = PlaquetteTunnelings::uniform(mhz_to_angular(t_mhz[0]));
      } else if (t_mhz.size() == 4) {
        t = {mhz_to_angular(t_mhz[0]), mhz_to_angular(t_mhz[1]), mhz_to_angular(t_mhz[2]), mhz_to_angular(t_mhz[3])};
      } else {
        throw ConfigError(line_of(node), "lattice.tunneling_mhz: plaquette needs 1 or 4 values (LT, LB, RT, RB)");
      }
      spec = plaquette(flux, t, 0.0, 0.0);
    } else if (preset == "rhombus_chain") {
      if (t_mhz.size() != 1) throw ConfigError(line_of(node), "lattice.tunneling_mhz: rhombus_chain needs one value");
      const int n = node["plaquettes"] ? static_cast<int>(integer(node["plaquettes"], "lattice.plaquettes")) : 1;
      spec = rhombus_chain(n, flux, mhz_to_angular(t_mhz[0]), 0.0, 0.0);
    } else if (preset == "two_site") {
      if (t_mhz.size() != 1) throw ConfigError(line_of(node), "lattice.tunneling_mhz: two_site needs one value");
      spec = LatticeSpec({SiteParams{}, SiteParams{}}, {{0, 1, mhz_to_angular(t_mhz[0])}}, {"L", "R"});
    } else if (preset == "custom") {
      if (!node["sites"]) throw ConfigError(line_of(node), "lattice.sites is required for a custom lattice");
      std::vector<std::string> labels;
      for (const auto& s : node["sites"]) labels.push_back(text(s, "lattice.sites"));
      std::vector<Bond> bonds;
      if (node["bonds"]) {
        for (const auto& b : node["bonds"]) {
          if (!b.IsSequence() || b.size() != 3) {
            throw ConfigError(line_of(b), "lattice.bonds: each bond is [site, site, t_mhz]");
          }
          bonds.push_back({site_ref(b[0], labels, "lattice.bonds"), site_ref(b[1], labels, "lattice.bonds"),
                           mhz_to_angular(number(b[2], "lattice.bonds"))});
        }
      }
      spec = LatticeSpec(std::vector<SiteParams>(labels.size()), bonds, labels);
    } else {
      throw ConfigError(line_of(node["preset"]),
                        "lattice.preset: unknown lattice '" + preset + "' (plaquette, rhombus_chain, two_site, custom)");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line_of(node), std::string("lattice: ") + e.what());
  }

  auto sites = spec.sites();
  const int n = spec.n_sites();
  if (node["omega_mhz"]) {
    const auto w = per_site(node["omega_mhz"], n, "lattice.omega_mhz");
    for (int i = 0; i < n; ++i) sites[i].omega = mhz_to_angular(w[i]);
  }
  if (node["interaction_mhz"]) {
    const auto u = per_site(node["interaction_mhz"], n, "lattice.interaction_mhz");
    for (int i = 0; i < n; ++i) sites[i].U = mhz_to_angular(u[i]);
  }
  mean_t = spec.bonds().empty() ? 0.0 : spec.mean_abs_tunneling();
  return spec.with_sites(sites);
}

double loop_flux_or_zero(const LatticeSpec& spec) {
  if (spec.n_sites() < 4) return 0.0;
  try {
    const auto cycle = rhombus_cycle(0);
    return loop_flux(spec, cycle) == Flux::Pi ? std::numbers::pi : 0.0;
  } catch (const std::invalid_argument&) {
    return 0.0;
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(source);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw ConfigError(0, "config must be a mapping of sections");
  check_keys(root,
             {"name", "command", "note", "lattice", "noise", "detuning_mhz", "experiment", "bands", "caging", "readout",
              "output"},
             "config");

  ExperimentConfig cfg;
  cfg.source = source;
  if (root["name"]) cfg.name = text(root["name"], "name");
  if (root["command"]) cfg.command = text(root["command"], "command");
  if (root["note"]) cfg.note = text(root["note"], "note");
  if (!root["lattice"]) throw ConfigError(0, "missing lattice section");

  const auto lat = root["lattice"];
  double mean_t = 0.0;
  LatticeSpec spec = build_lattice(lat, mean_t);
  if (lat["max_occupancy"]) {
    cfg.max_occ = static_cast<int>(integer(lat["max_occupancy"], "lattice.max_occupancy"));
    if (*cfg.max_occ < 1) throw ConfigError(line_of(lat["max_occupancy"]), "lattice.max_occupancy must be >= 1");
  }
  const int n_sites = spec.n_sites();
  auto sites = spec.sites();

  if (const auto noise = root["noise"]) {
    check_keys(noise, {"t1_01_us", "t1_12_us", "tphi_us"}, "noise");
    auto fill = [&](const char* key, std::optional<double> SiteParams::*field) {
      if (!noise[key]) return;
      const auto v = per_site(noise[key], n_sites, std::string("noise.") + key);
      for (int i = 0; i < n_sites; ++i) {
        if (!(v[i] > 0.0)) throw ConfigError(line_of(noise[key]), std::string("noise.") + key + ": must be positive");
        sites[i].*field = v[i];
      }
    };
    fill("t1_01_us", &SiteParams::t1_01);
    fill("t1_12_us", &SiteParams::t1_12);
    fill("tphi_us", &SiteParams::tphi);
  }
  if (const auto det = root["detuning_mhz"]) {
    if (!det.IsMap()) throw ConfigError(line_of(det), "detuning_mhz: expected site: MHz entries");
    for (auto it = det.begin(); it != det.end(); ++it) {
      const int i = site_ref(it->first, spec.labels(), "detuning_mhz");
      sites[i].omega += mhz_to_angular(number(it->second, "detuning_mhz"));
    }
  }
  cfg.lattice = spec.with_sites(sites);

  if (const auto ex = root["experiment"]) {
    check_keys(ex,
               {"initial_state", "particles", "t_max_us", "t_max_swaps", "n_times", "mode", "observables", "partition"},
               "experiment");
    bool have_particles = false;
    if (ex["particles"]) {
      cfg.n_particles = static_cast<int>(integer(ex["particles"], "experiment.particles"));
      if (cfg.n_particles < 1) throw ConfigError(line_of(ex["particles"]), "experiment.particles must be >= 1");
      have_particles = true;
    }
    if (ex["initial_state"]) {
      const auto node = ex["initial_state"];
      cfg.initial_state = integers(node, "experiment.initial_state");
      if (static_cast<int>(cfg.initial_state.size()) != n_sites) {
        throw ConfigError(line_of(node), "experiment.initial_state: expected " + std::to_string(n_sites) + " entries");
      }
      int total = 0;
      for (int k : cfg.initial_state) {
        if (k < 0) throw ConfigError(line_of(node), "experiment.initial_state: negative occupation");
        if (cfg.max_occ && k > *cfg.max_occ) {
          throw ConfigError(line_of(node), "experiment.initial_state: occupation exceeds lattice.max_occupancy");
        }
        total += k;
      }
      if (have_particles && total != cfg.n_particles) {
        throw ConfigError(line_of(node), "experiment.initial_state holds " + std::to_string(total) +
                                             " particles but experiment.particles is " +
                                             std::to_string(cfg.n_particles));
      }
      if (total == 0) throw ConfigError(line_of(node), "experiment.initial_state is empty");
      cfg.n_particles = total;
    }
    if (ex["t_max_us"] && ex["t_max_swaps"]) {
      throw ConfigError(line_of(ex["t_max_swaps"]), "give either experiment.t_max_us or experiment.t_max_swaps");
    }
    if (ex["t_max_us"]) {
      cfg.t_max_us = number(ex["t_max_us"], "experiment.t_max_us");
      if (!(cfg.t_max_us > 0.0)) throw ConfigError(line_of(ex["t_max_us"]), "experiment.t_max_us must be positive");
    }
    if (ex["t_max_swaps"]) {
      const double swaps = number(ex["t_max_swaps"], "experiment.t_max_swaps");
      if (!(swaps > 0.0)) throw ConfigError(line_of(ex["t_max_swaps"]), "experiment.t_max_swaps must be positive");
      if (mean_t == 0.0) throw ConfigError(line_of(ex["t_max_swaps"]), "experiment.t_max_swaps needs tunneling");
      cfg.t_max_us = swaps * swap_time(cfg.lattice);
    }
    if (ex["n_times"]) {
      cfg.n_times = static_cast<int>(integer(ex["n_times"], "experiment.n_times"));
      if (cfg.n_times < 2) throw ConfigError(line_of(ex["n_times"]), "experiment.n_times must be >= 2");
    }
    if (ex["mode"]) {
      const auto m = text(ex["mode"], "experiment.mode");
      if (m == "unitary") {
        cfg.mode = EvolutionMode::Unitary;
      } else if (m == "lindblad") {
        cfg.mode = EvolutionMode::Lindblad;
      } else {
        throw ConfigError(line_of(ex["mode"]), "experiment.mode: expected unitary or lindblad");
      }
    }
    if (ex["observables"]) {
      const auto node = ex["observables"];
      if (!node.IsSequence()) throw ConfigError(line_of(node), "experiment.observables: expected a list");
      cfg.observables = {false, false, false, false};
      for (const auto& item : node) {
        const auto o = text(item, "experiment.observables");
        if (o == "occupation") {
          cfg.observables.occupation = true;
        } else if (o == "level1") {
          cfg.observables.level1 = true;
        } else if (o == "level2") {
          cfg.observables.level2 = true;
        } else if (o == "pairs") {
          cfg.observables.pairs = true;
        } else {
          throw ConfigError(line_of(item), "experiment.observables: unknown observable '" + o +
                                               "' (occupation, level1, level2, pairs)");
        }
      }
    }
    if (ex["partition"]) {
      auto p = integers(ex["partition"], "experiment.partition");
      std::sort(p.begin(), p.end(), std::greater<>());
      if (p.empty() || p.back() < 1 || static_cast<int>(p.size()) > n_sites) {
        throw ConfigError(line_of(ex["partition"]), "experiment.partition: invalid partition");
      }
      cfg.partition = p;
    }
  }

  cfg.bands.t = mean_t;
  if (const auto b = root["bands"]) {
    check_keys(b, {"flux", "tunneling_mhz", "k_points"}, "bands");
    if (b["flux"]) cfg.bands.flux = flux_value(b["flux"], "bands.flux");
    if (b["tunneling_mhz"]) cfg.bands.t = mhz_to_angular(number(b["tunneling_mhz"], "bands.tunneling_mhz"));
    if (b["k_points"]) cfg.bands.k_points = static_cast<int>(integer(b["k_points"], "bands.k_points"));
    if (cfg.bands.k_points < 2) throw ConfigError(line_of(b), "bands.k_points must be >= 2");
  } else {
    cfg.bands.flux = loop_flux_or_zero(cfg.lattice);
  }

  if (const auto c = root["caging"]) {
    check_keys(c, {"mode", "max_particles", "conjecture_n"}, "caging");
    if (c["mode"]) {
      try {
        cfg.caging.mode = parse_caging_mode(text(c["mode"], "caging.mode"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(line_of(c["mode"]), std::string("caging.mode: ") + e.what());
      }
    }
    if (c["max_particles"]) {
      cfg.caging.max_particles = static_cast<int>(integer(c["max_particles"], "caging.max_particles"));
      if (cfg.caging.max_particles < 1) throw ConfigError(line_of(c["max_particles"]), "caging.max_particles must be >= 1");
    }
    if (c["conjecture_n"]) {
      cfg.caging.conjecture_n = integers(c["conjecture_n"], "caging.conjecture_n");
      for (int n : cfg.caging.conjecture_n) {
        if (n < 2 || n % 4 != 2) throw ConfigError(line_of(c["conjecture_n"]), "caging.conjecture_n: entries must be 2 mod 4");
      }
    }
  }

  if (const auto r = root["readout"]) {
    check_keys(r, {"shots", "alpha", "seed", "fidelity_01", "fidelity_12"}, "readout");
    if (r["shots"]) cfg.readout.shots = integer(r["shots"], "readout.shots");
    if (r["alpha"]) cfg.readout.alpha = number(r["alpha"], "readout.alpha");
    if (r["seed"]) {
      try {
        cfg.readout.seed = r["seed"].as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        throw ConfigError(line_of(r["seed"]), "readout.seed: expected an unsigned integer");
      }
    }
    if (r["fidelity_01"]) cfg.readout.fidelity_01 = number(r["fidelity_01"], "readout.fidelity_01");
    if (r["fidelity_12"]) cfg.readout.fidelity_12 = number(r["fidelity_12"], "readout.fidelity_12");
    if (cfg.readout.shots < 1) throw ConfigError(line_of(r), "readout.shots must be >= 1");
    if (!(cfg.readout.alpha > 0.0 && cfg.readout.alpha < 1.0)) throw ConfigError(line_of(r), "readout.alpha must be in (0, 1)");
    for (double f : {cfg.readout.fidelity_01, cfg.readout.fidelity_12}) {
      if (!(f > 0.5 && f <= 1.0)) throw ConfigError(line_of(r), "readout fidelities must be in (0.5, 1]");
    }
  }

  if (const auto o = root["output"]) {
    check_keys(o, {"dir"}, "output");
    if (o["dir"]) cfg.output_dir = text(o["dir"], "output.dir");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace abcage::cli
