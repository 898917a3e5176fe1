#include "abcage/cli/presets.hpp"

#include <stdexcept>

namespace abcage::cli {

namespace {

// Device tables: tunnelings are LT, LB, RT, RB; per-site lists are L, T, B, R.
// Interactions are -E_C. Dephasing uses the effective 40 us for single
// excitations and 20 us for doublon runs.

const char* kZeroDevice = R"(lattice:
  preset: plaquette
  flux: zero
  tunneling_mhz: [11.879, 11.792, 11.587, 11.734]
  interaction_mhz: [-158.10, -157.90, -157.80, -157.26]
)";

const char* kPiDevice = R"(lattice:
  preset: plaquette
  flux: pi
  tunneling_mhz: [11.781, 11.884, 11.736, 11.238]
  interaction_mhz: [-157.30, -157.56, -158.91, -158.40]
)";

const char* kZeroNoise = R"(noise:
  t1_01_us: [42.4, 42.2, 44.1, 48.5]
  t1_12_us: [32.6, 22.9, 32.8, 19.2]
)";

const char* kPiNoise = R"(noise:
  t1_01_us: [50.6, 43.6, 50.4, 44.0]
  t1_12_us: [27.3, 28.1, 27.9, 27.8]
)";

std::string single_walk(const std::string& name, bool pi) {
  return "name: " + name + "\ncommand: walk\n" + (pi ? kPiDevice : kZeroDevice) +
         R"(experiment:
  initial_state: [1, 0, 0, 0]
  t_max_swaps: 12
  n_times: 481
  observables: [occupation, level1]
readout:
  shots: 3000
  alpha: 0.05
  seed: 1
)";
}

std::string doublon_walk(const std::string& name, bool pi) {
  return "name: " + name + "\ncommand: lindblad-walk\n" + (pi ? kPiDevice : kZeroDevice) +
         (pi ? kPiNoise : kZeroNoise) + R"(  tphi_us: 20
experiment:
  initial_state: [2, 0, 0, 0]
  t_max_us: 2.0
  n_times: 401
  mode: lindblad
  observables: [occupation, level1, level2]
readout:
  shots: 3000
  alpha: 0.05
  seed: 1
)";
}

std::string pair_walk(const std::string& name, bool pi) {
  return "name: " + name + "\ncommand: lindblad-walk\n" + (pi ? kPiDevice : kZeroDevice) +
         (pi ? kPiNoise : kZeroNoise) + R"(  tphi_us: 40
experiment:
  initial_state: [1, 0, 0, 1]
  t_max_swaps: 12
  n_times: 481
  mode: lindblad
  observables: [occupation, level1, pairs]
readout:
  shots: 3000
  alpha: 0.05
  seed: 1
)";
}

std::vector<Preset> build() {
  std::vector<Preset> out;
  out.push_back({"fig2a", "single particle from L, zero flux", single_walk("fig2a", false)});
  out.push_back({"fig2b", "single particle from L, pi flux (caged)", single_walk("fig2b", true)});
  out.push_back({"fig3a", "doublon from L with decoherence, zero flux", doublon_walk("fig3a", false)});
  out.push_back({"fig3b", "doublon from L with decoherence, pi flux", doublon_walk("fig3b", true)});
  out.push_back({"fig4a", "particle pair from |LR> with decoherence, zero flux", pair_walk("fig4a", false)});
  out.push_back({"fig4b", "particle pair from |LR> with decoherence, pi flux", pair_walk("fig4b", true)});
  out.push_back({"figS4", "two hard-core particles on a three-plaquette chain", R"(name: figS4
command: walk
note: initial particles on the two spinal sites of the middle plaquette (S1, S2)
lattice:
  preset: rhombus_chain
  flux: pi
  plaquettes: 3
  tunneling_mhz: 11.66
  max_occupancy: 1
experiment:
  initial_state: [0, 0, 0, 1, 0, 0, 1, 0, 0, 0]
  t_max_swaps: 20
  n_times: 801
  observables: [occupation, level1, pairs]
)"});
  out.push_back({"figS7", "pi-flux doublon with R detuned by 0.2 MHz", std::string("name: figS7\ncommand: walk\n") +
                                                                          kPiDevice + R"(detuning_mhz:
  R: 0.2
experiment:
  initial_state: [2, 0, 0, 0]
  t_max_us: 2.0
  n_times: 801
  observables: [occupation, level2]
)"});
  out.push_back({"figS8", "caging classification for n = 1..5 at U/t = -13.5", R"(name: figS8
command: cage-classify
lattice:
  preset: plaquette
  flux: pi
  tunneling_mhz: 11.7
  interaction_mhz: -157.95
experiment:
  particles: 3
caging:
  mode: hardcore_limit
  max_particles: 5
  conjecture_n: [6]
)"});
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("unknown preset '" + name + "'");
}

}  // namespace abcage::cli
