#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "abcage/dynamics.hpp"
#include "abcage/fock_basis.hpp"
#include "abcage/lattice.hpp"

namespace abcage {

/// Per-site decoherence times in us. Missing entries switch the channel off.
struct SiteNoise {
  std::optional<double> t1_01;
  std::optional<double> t1_12;  // overrides the 1->2 decay implied by b_i
  std::optional<double> tphi;
};

struct NoiseParams {
  std::vector<SiteNoise> sites;

  /// Noise times stored on the lattice sites.
  static NoiseParams from_lattice(const LatticeSpec& spec);
  /// Same T1 and Tphi everywhere.
  static NoiseParams uniform(int n_sites, std::optional<double> t1, std::optional<double> tphi);

  /// Smallest noise time present, if any.
  std::optional<double> shortest_time() const;
};

/// States with 0..max_particles particles, sectors in ascending particle
/// number, each sector in FockBasis order. Decay moves weight between sectors.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int max_particles, std::optional<int> max_occ = std::nullopt);

  int n_sites() const { return n_sites_; }
  int max_particles() const { return max_particles_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<FockState>& states() const { return states_; }
  const std::vector<FockBasis>& sectors() const { return sectors_; }
  /// Offset of the first state with `n` particles.
  std::size_t offset(int n) const { return offsets_.at(n); }
  std::optional<std::size_t> find(const FockState& occ) const;

 private:
  int n_sites_;
  int max_particles_;
  std::vector<FockBasis> sectors_;
  std::vector<std::size_t> offsets_;
  std::vector<FockState> states_;
};

/// Density matrix over a SectorBasis. Construction checks unit trace
/// (1e-8), Hermiticity (1e-10) and positivity (min eigenvalue >= -1e-8).
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd rho);

  static DensityMatrix pure(const SectorBasis& basis, const FockState& occ);
  static DensityMatrix from_state(const Eigen::VectorXcd& psi);

  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  Eigen::MatrixXcd rho_;
};

/// Block-diagonal Hamiltonian over every sector of `basis`.
Eigen::MatrixXcd sector_hamiltonian(const LatticeSpec& spec, const SectorBasis& basis);

struct LindbladOptions {
  /// Fixed RK4 step (us). Default min(tau_swap / 200, Tmin / 1000).
  std::optional<double> dt;
  /// Max deviation tolerated between a step and its half step on the probe window.
  double convergence_tol = 1e-7;
  int max_halvings = 4;
  ObservableSet observables{};
  /// Minimum eigenvalue / trace diagnostics recorded per time point.
  bool diagnostics = false;
};

struct LindbladResult {
  EvolutionResult evolution;
  double dt = 0.0;
  /// Populated when LindbladOptions::diagnostics is set.
  std::vector<double> trace;
  std::vector<double> min_eigenvalue;
  std::vector<double> hermiticity_error;
};

/// Integrates
///   d rho/dt = -i[H, rho] + sum_i g1_i D[b_i] rho + sum_i gphi_i D[n_i] rho
/// with D[L] rho = L rho L^+ - {L^+ L, rho}/2, g1 = 1/T1 and gphi = 2/Tphi.
/// When a site sets t1_12 the decay splits into |0><1| at 1/t1_01 and
/// |1><2| at 1/t1_12 (higher levels keep the b_i form).
/// `times` must be ascending and start at or after 0; rho0 is the state at 0.
LindbladResult lindblad_evolve(const LatticeSpec& spec, const SectorBasis& basis, const DensityMatrix& rho0,
                               std::span<const double> times, const NoiseParams& noise,
                               const LindbladOptions& options = {});

/// Left-site population of a two-site single-photon swap with decay and
/// dephasing:
///   P_L = cos(2t tau)/2 exp(-tau/2T1L - tau/2T1B - tau/Tphi) + exp(-tau/2T1L - tau/2T1B)/2
std::vector<double> two_site_envelope(double t, double t1_l, double t1_b, double tphi,
                                      std::span<const double> times);

}  // namespace abcage
