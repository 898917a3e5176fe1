#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcage/fock_basis.hpp"
#include "abcage/hamiltonian.hpp"
#include "abcage/lattice.hpp"
#include "abcage/spectral.hpp"

namespace abcage {

/// Normalized pure state over some basis (norm checked to 1e-10).
class QuantumState {
 public:
  explicit QuantumState(Eigen::VectorXcd amplitudes);

  static QuantumState basis_state(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  std::complex<double> operator[](Eigen::Index i) const { return amps_[i]; }
  Eigen::VectorXd probabilities() const { return amps_.cwiseAbs2(); }

 private:
  Eigen::VectorXcd amps_;
};

/// psi(t) = sum_k exp(-i E_k t) <v_k|psi0> v_k for every t in `times`.
std::vector<QuantumState> evolve_state(const Eigensystem& eigs, const QuantumState& psi0,
                                       std::span<const double> times);

/// exp(-iHt) psi0 by a scaled-and-squared Taylor series. Independent of the
/// eigensolver; used as an oracle. Throws std::runtime_error if the series
/// fails to converge within its term budget.
QuantumState evolve_bruteforce(const HermitianMatrix& h, const QuantumState& psi0, double t);

// Observables take any state list (a FockBasis or the multi-sector basis of
// the open-system solver) together with per-state probabilities.

std::vector<double> site_occupation(std::span<const double> probs, std::span<const FockState> states);
double level_probability(std::span<const double> probs, std::span<const FockState> states, int site, int level);
/// Probability that sites i and j each hold exactly one particle.
double pair_probability(std::span<const double> probs, std::span<const FockState> states, int i, int j);

std::vector<double> site_occupation(const QuantumState& psi, const FockBasis& basis);
double level_probability(const QuantumState& psi, const FockBasis& basis, int site, int level);
double pair_probability(const QuantumState& psi, const FockBasis& basis, int i, int j);

/// tau_swap = 2 pi / (4 tbar), tbar the mean |t| over bonds (us).
double swap_time(const LatticeSpec& spec);

/// n_times evenly spaced points on [0, t_max].
std::vector<double> time_grid(double t_max, int n_times);

/// Which observable families to record.
struct ObservableSet {
  bool occupation = true;  // n_<site>
  bool level1 = true;      // P1_<site>
  bool level2 = true;      // P2_<site>
  bool pairs = true;       // PP_<a>_<b>
};

struct Series {
  std::string name;
  std::vector<double> values;
};

/// Time grid plus named observable series.
struct EvolutionResult {
  std::vector<double> times;  // us
  double tau_swap = 0.0;      // us
  std::vector<Series> series;

  /// Throws std::out_of_range for unknown names.
  const std::vector<double>& get(const std::string& name) const;
  bool has(const std::string& name) const;

  /// Columns t_us, t_swap, then one per series.
  void write_csv(std::ostream& os) const;
};

/// Appends one time slice of observables computed from state probabilities.
class ObservableRecorder {
 public:
  ObservableRecorder(const LatticeSpec& spec, ObservableSet which);

  void record(std::span<const double> probs, std::span<const FockState> states);
  std::vector<Series> take() { return std::move(series_); }

 private:
  int n_sites_;
  ObservableSet which_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<Series> series_;
};

/// Closed-system walk from `psi0`, returning the requested observables.
EvolutionResult unitary_walk(const LatticeSpec& spec, const FockBasis& basis, const QuantumState& psi0,
                             std::span<const double> times, ObservableSet which = {});

}  // namespace abcage
