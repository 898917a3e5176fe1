#include "abcage/dynamics.hpp"

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

#include "abcage/units.hpp"

namespace abcage {

QuantumState::QuantumState(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw std::invalid_argument("QuantumState: empty amplitude vector");
  if (std::abs(amps_.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("QuantumState: amplitudes are not normalized (norm " +
                                std::to_string(amps_.norm()) + ")");
  }
}

QuantumState QuantumState::basis_state(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw std::invalid_argument("QuantumState::basis_state: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v[index] = 1.0;
  return QuantumState(std::move(v));
}

std::vector<QuantumState> evolve_state(const Eigensystem& eigs, const QuantumState& psi0,
                                       std::span<const double> times) {
  if (psi0.dim() != eigs.dim()) throw std::invalid_argument("evolve_state: dimension mismatch");
  const Eigen::VectorXcd overlaps = eigs.vectors.adjoint() * psi0.amplitudes();
  std::vector<QuantumState> out;
  out.reserve(times.size());
  Eigen::VectorXcd phased(overlaps.size());
  for (double t : times) {
    for (Eigen::Index k = 0; k < overlaps.size(); ++k) {
      phased[k] = std::polar(1.0, -eigs.values[k] * t) * overlaps[k];
    }
    out.emplace_back(eigs.vectors * phased);
  }
  return out;
}

QuantumState evolve_bruteforce(const HermitianMatrix& h, const QuantumState& psi0, double t) {
  if (psi0.dim() != h.dim()) throw std::invalid_argument("evolve_bruteforce: dimension mismatch");
  constexpr int kMaxTerms = 60;
  constexpr double kStepNorm = 0.5;

  const Eigen::MatrixXcd a_full = std::complex<double>(0.0, -t) * h.matrix();
  // Induced infinity norm bounds the spectral radius.
  const double norm = a_full.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > kStepNorm) squarings = static_cast<int>(std::ceil(std::log2(norm / kStepNorm)));
  const Eigen::MatrixXcd a = a_full / std::ldexp(1.0, squarings);

  const auto d = h.dim();
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd sum = term;
  bool converged = false;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term = (term * a) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("evolve_bruteforce: Taylor series did not converge");
  for (int s = 0; s < squarings; ++s) sum = sum * sum;

  Eigen::VectorXcd out = sum * psi0.amplitudes();
  return QuantumState(std::move(out));
}

std::vector<double> site_occupation(std::span<const double> probs, std::span<const FockState> states) {
  if (probs.size() != states.size()) throw std::invalid_argument("site_occupation: size mismatch");
  if (states.empty()) return {};
  std::vector<double> out(states.front().size(), 0.0);
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += probs[s] * states[s][i];
  }
  return out;
}

double level_probability(std::span<const double> probs, std::span<const FockState> states, int site, int level) {
  if (probs.size() != states.size()) throw std::invalid_argument("level_probability: size mismatch");
  if (level < 0) throw std::invalid_argument("level_probability: negative level");
  double p = 0.0;
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (states[s].at(site) == level) p += probs[s];
  }
  return p;
}

double pair_probability(std::span<const double> probs, std::span<const FockState> states, int i, int j) {
  if (probs.size() != states.size()) throw std::invalid_argument("pair_probability: size mismatch");
  if (i == j) throw std::invalid_argument("pair_probability: sites must differ");
  double p = 0.0;
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (states[s].at(i) == 1 && states[s].at(j) == 1) p += probs[s];
  }
  return p;
}

namespace {

std::vector<double> probs_of(const QuantumState& psi, const FockBasis& basis) {
  if (static_cast<std::size_t>(psi.dim()) != basis.size()) {
    throw std::invalid_argument("observable: state and basis dimensions differ");
  }
  const Eigen::VectorXd p = psi.probabilities();
  return {p.data(), p.data() + p.size()};
}

}  // namespace

std::vector<double> site_occupation(const QuantumState& psi, const FockBasis& basis) {
  return site_occupation(probs_of(psi, basis), basis.states());
}

double level_probability(const QuantumState& psi, const FockBasis& basis, int site, int level) {
  return level_probability(probs_of(psi, basis), basis.states(), site, level);
}

double pair_probability(const QuantumState& psi, const FockBasis& basis, int i, int j) {
  return pair_probability(probs_of(psi, basis), basis.states(), i, j);
}

double swap_time(const LatticeSpec& spec) {
  const double tbar = spec.mean_abs_tunneling();
  if (!(tbar > 0.0)) throw std::invalid_argument("swap_time: lattice has no nonzero bonds");
  return kTwoPi / (4.0 * tbar);
}

std::vector<double> time_grid(double t_max, int n_times) {
  if (n_times < 1) throw std::invalid_argument("time_grid: need at least one point");
  if (t_max < 0.0) throw std::invalid_argument("time_grid: negative duration");
  std::vector<double> out(n_times);
  for (int i = 0; i < n_times; ++i) out[i] = n_times == 1 ? 0.0 : t_max * i / (n_times - 1);
  return out;
}

const std::vector<double>& EvolutionResult::get(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return s.values;
  }
  throw std::out_of_range("EvolutionResult: no series named " + name);
}

bool EvolutionResult::has(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return true;
  }
  return false;
}

void EvolutionResult::write_csv(std::ostream& os) const {
  os.precision(12);
  os << "t_us,t_swap";
  for (const auto& s : series) os << ',' << s.name;
  os << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    os << times[k] << ',' << (tau_swap > 0.0 ? times[k] / tau_swap : 0.0);
    for (const auto& s : series) os << ',' << s.values[k];
    os << '\n';
  }
}

ObservableRecorder::ObservableRecorder(const LatticeSpec& spec, ObservableSet which)
    : n_sites_(spec.n_sites()), which_(which) {
  const auto& lab = spec.labels();
  if (which.occupation) {
    for (int i = 0; i < n_sites_; ++i) series_.push_back({"n_" + lab[i], {}});
  }
  if (which.level1) {
    for (int i = 0; i < n_sites_; ++i) series_.push_back({"P1_" + lab[i], {}});
  }
  if (which.level2) {
    for (int i = 0; i < n_sites_; ++i) series_.push_back({"P2_" + lab[i], {}});
  }
  if (which.pairs) {
    for (int i = 0; i < n_sites_; ++i) {
      for (int j = i + 1; j < n_sites_; ++j) {
        pairs_.emplace_back(i, j);
        series_.push_back({"PP_" + lab[i] + "_" + lab[j], {}});
      }
    }
  }
}

void ObservableRecorder::record(std::span<const double> probs, std::span<const FockState> states) {
  std::size_t col = 0;
  if (which_.occupation) {
    for (double n : site_occupation(probs, states)) series_[col++].values.push_back(n);
  }
  if (which_.level1) {
    for (int i = 0; i < n_sites_; ++i) series_[col++].values.push_back(level_probability(probs, states, i, 1));
  }
  if (which_.level2) {
    for (int i = 0; i < n_sites_; ++i) series_[col++].values.push_back(level_probability(probs, states, i, 2));
  }
  for (auto [i, j] : pairs_) series_[col++].values.push_back(pair_probability(probs, states, i, j));
}

EvolutionResult unitary_walk(const LatticeSpec& spec, const FockBasis& basis, const QuantumState& psi0,
                             std::span<const double> times, ObservableSet which) {
  const auto eigs = eigendecompose(build_hamiltonian(spec, basis));
  ObservableRecorder recorder(spec, which);
  for (const auto& psi : evolve_state(eigs, psi0, times)) {
    const Eigen::VectorXd p = psi.probabilities();
    recorder.record({p.data(), static_cast<std::size_t>(p.size())}, basis.states());
  }
  EvolutionResult out;
  out.times.assign(times.begin(), times.end());
  out.tau_swap = spec.bonds().empty() ? 0.0 : swap_time(spec);
  out.series = recorder.take();
  return out;
}

}  // namespace abcage
