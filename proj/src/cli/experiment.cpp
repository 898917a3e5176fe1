#include "abcage/cli/experiment.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "abcage/caging.hpp"
#include "abcage/dynamics.hpp"
#include "abcage/hamiltonian.hpp"
#include "abcage/lindblad.hpp"
#include "abcage/measurement.hpp"
#include "abcage/spectral.hpp"
#include "abcage/units.hpp"

namespace abcage::cli {

using json = nlohmann::ordered_json;

const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> names = {"spectrum",      "bands", "walk",    "lindblad-walk",
                                                 "cage-classify", "graph", "pipeline"};
  return names;
}

namespace {

void require_walk_inputs(const ExperimentConfig& cfg, const std::string& command) {
  if (cfg.initial_state.empty()) throw ConfigError(0, command + " needs experiment.initial_state");
  if (!(cfg.t_max_us > 0.0)) throw ConfigError(0, command + " needs experiment.t_max_us or experiment.t_max_swaps");
}

std::string csv_of(const EvolutionResult& r) {
  std::ostringstream os;
  r.write_csv(os);
  return os.str();
}

EvolutionResult evolve(const ExperimentConfig& cfg, EvolutionMode mode, const ObservableSet& which) {
  const auto times = time_grid(cfg.t_max_us, cfg.n_times);
  if (mode == EvolutionMode::Unitary) {
    const FockBasis basis(cfg.lattice.n_sites(), cfg.n_particles, cfg.max_occ);
    const auto psi0 = QuantumState::basis_state(static_cast<Eigen::Index>(basis.size()),
                                                static_cast<Eigen::Index>(state_index(basis, cfg.initial_state)));
    return unitary_walk(cfg.lattice, basis, psi0, times, which);
  }
  const SectorBasis basis(cfg.lattice.n_sites(), cfg.n_particles, cfg.max_occ);
  LindbladOptions opts;
  opts.observables = which;
  return lindblad_evolve(cfg.lattice, basis, DensityMatrix::pure(basis, cfg.initial_state), times,
                         NoiseParams::from_lattice(cfg.lattice), opts)
      .evolution;
}

Artifact spectrum(const ExperimentConfig& cfg) {
  const int n = cfg.n_particles;
  const FockBasis basis(cfg.lattice.n_sites(), n, cfg.max_occ);
  // The vacuum carries no energy, so sector eigenvalues are the lines.
  const auto eigs = eigendecompose(build_hamiltonian(cfg.lattice, basis));
  json j;
  j["n_particles"] = n;
  j["hard_core"] = basis.hard_core();
  auto lines = json::array();
  for (Eigen::Index k = 0; k < eigs.values.size(); ++k) lines.push_back(angular_to_mhz(eigs.values[k]));
  j["lines_mhz"] = lines;

  double u_mean = 0.0;
  double omega_mean = 0.0;
  for (const auto& s : cfg.lattice.sites()) {
    u_mean += s.U;
    omega_mean += s.omega;
  }
  u_mean /= cfg.lattice.n_sites();
  omega_mean /= cfg.lattice.n_sites();
  if (u_mean != 0.0 && n > 1) {
    const auto groups = eigenenergy_groups(eigs, u_mean, 0.3, n * omega_mean);
    auto g = json::array();
    for (const auto& [m, idx] : groups.groups) g.push_back(json{{"multiple_of_U", m}, {"count", idx.size()}});
    j["interaction_groups"] = g;
    j["unassigned"] = groups.unassigned.size();
  }
  return {"spectrum.json", "", j};
}

Artifact bands(const ExperimentConfig& cfg) {
  if (!(cfg.bands.t > 0.0)) throw ConfigError(0, "bands needs bands.tunneling_mhz or a lattice with bonds");
  std::ostringstream os;
  write_bands_csv(os, bloch_bands(cfg.bands.flux, cfg.bands.t, cfg.bands.k_points), 1.0 / kTwoPi);
  return {"bands.csv", os.str(), std::nullopt};
}

Artifact walk(const ExperimentConfig& cfg) {
  require_walk_inputs(cfg, "walk");
  return {"walk.csv", csv_of(evolve(cfg, EvolutionMode::Unitary, cfg.observables)), std::nullopt};
}

Artifact lindblad_walk(const ExperimentConfig& cfg) {
  require_walk_inputs(cfg, "lindblad-walk");
  return {"lindblad_walk.csv", csv_of(evolve(cfg, EvolutionMode::Lindblad, cfg.observables)), std::nullopt};
}

Artifact graph(const ExperimentConfig& cfg) {
  const FockBasis basis(cfg.lattice.n_sites(), cfg.n_particles, cfg.max_occ);
  std::optional<std::vector<std::size_t>> restrict_to;
  if (cfg.partition) {
    restrict_to = subspace_indices(basis, *cfg.partition);
    if (restrict_to->empty()) throw ConfigError(0, "experiment.partition does not occur for this particle number");
  }
  std::ostringstream os;
  os << "# columns: node_a node_b weight_mhz\n";
  write_edge_list(os, adjacency_graph(cfg.lattice, basis, restrict_to), 1.0 / kTwoPi);
  return {"graph.txt", os.str(), std::nullopt};
}

Artifact cage_classify(const ExperimentConfig& cfg) {
  json j;
  j["mode"] = to_string(cfg.caging.mode);
  j["max_particles"] = cfg.caging.max_particles;
  auto reports = json::array();
  auto partners = json::array();
  for (int n = 1; n <= cfg.caging.max_particles; ++n) {
    for (const auto& rep : classify_all(cfg.lattice, n, cfg.caging.mode)) {
      reports.push_back(json::parse(rep.to_json(cfg.lattice)));
      const bool plaquette = cfg.lattice.n_sites() == 4;
      if (plaquette && n % 2 == 1 && rep.classification == CagingClass::FockSpace) {
        for (const auto& w : rep.witnesses) {
          const auto partner = caged_partner(cfg.lattice, w.initial);
          json item;
          item["initial"] = w.initial;
          item["partner"] = partner.partner ? json(*partner.partner) : json(nullptr);
          item["rotation_image"] = partner.is_rotation_image;
          partners.push_back(item);
        }
      }
    }
  }
  j["reports"] = reports;
  j["partners"] = partners;
  auto conj = json::array();
  for (int n : cfg.caging.conjecture_n) {
    const auto c = even_n_conjecture(cfg.lattice, n);
    conj.push_back(json{{"n", c.n_particles},
                        {"partition", c.partition},
                        {"expected", to_string(CagingClass::FockSpace)},
                        {"observed", to_string(c.observed)},
                        {"holds", c.holds}});
  }
  j["conjectures"] = conj;
  return {"cage_classify.json", "", j};
}

Artifact pipeline(const ExperimentConfig& cfg) {
  require_walk_inputs(cfg, "pipeline");
  ObservableSet which = cfg.observables;
  which.occupation = false;
  if (which.pairs) which.level1 = true;
  if (!which.level1 && !which.level2) {
    throw ConfigError(0, "pipeline needs level1, level2 or pairs in experiment.observables");
  }
  const auto evo = evolve(cfg, cfg.mode, which);
  return {"pipeline.csv", csv_of(readout_pipeline(evo, cfg.readout)), std::nullopt};
}

}  // namespace

Artifact run_experiment(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "spectrum") return spectrum(cfg);
  if (command == "bands") return bands(cfg);
  if (command == "walk") return walk(cfg);
  if (command == "lindblad-walk") return lindblad_walk(cfg);
  if (command == "graph") return graph(cfg);
  if (command == "cage-classify") return cage_classify(cfg);
  if (command == "pipeline") return pipeline(cfg);
  throw std::invalid_argument("unknown command '" + command + "'");
}

std::string render(const Artifact& artifact, const Metadata& meta) {
  if (artifact.json) {
    json m;
    m["version"] = meta.version;
    m["command"] = meta.command;
    m["config"] = meta.config_name;
    m["config_hash"] = meta.config_hash;
    m["seed"] = meta.seed;
    if (!meta.note.empty()) m["note"] = meta.note;
    m["generated"] = meta.generated;
    json doc;
    doc["meta"] = m;
    for (const auto& [k, v] : artifact.json->items()) doc[k] = v;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# abcage " << meta.version << '\n';
  os << "# command=" << meta.command << '\n';
  if (!meta.config_name.empty()) os << "# config=" << meta.config_name << '\n';
  os << "# config_hash=" << meta.config_hash << '\n';
  os << "# seed=" << meta.seed << '\n';
  if (!meta.note.empty()) os << "# note=" << meta.note << '\n';
  os << "# generated=" << meta.generated << '\n';
  os << artifact.text;
  return os.str();
}

}  // namespace abcage::cli
