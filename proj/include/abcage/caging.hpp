#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcage/fock_basis.hpp"
#include "abcage/hamiltonian.hpp"
#include "abcage/lattice.hpp"
#include "abcage/spectral.hpp"

namespace abcage {

struct ReachabilityResult {
  std::size_t initial = 0;
  std::vector<std::size_t> unreachable;  // ascending basis indices
  /// Per target: max over energy groups of |<target|P_k|initial>|.
  std::vector<double> max_amplitude;
  /// One energy per degenerate group, ascending.
  std::vector<double> group_energies;
};

/// Targets that <j|exp(-iHt)|initial> never reaches. Degenerate levels are
/// merged into projectors, so the result does not depend on how the solver
/// picked vectors inside a degenerate eigenspace.
ReachabilityResult unreachable_states(const Eigensystem& eigs, std::size_t initial, double tol = 1e-9);

/// Sites whose mean occupation stays within `tol` of its t=0 value at every
/// grid time. `states[k]` is the Fock state of basis index k. Throws if the
/// grid has fewer than 400 points.
std::vector<int> frozen_sites(const Eigensystem& eigs, std::span<const FockState> states, std::size_t initial,
                              std::span<const double> grid, double tol = 1e-9);

enum class CagingClass { NotCaged, RealSpace, FockSpace };
enum class CagingMode { HardcoreLimit, FiniteU };

std::string to_string(CagingClass c);
std::string to_string(CagingMode m);
/// Accepts "hardcore_limit" and "finite_U"; throws std::invalid_argument otherwise.
CagingMode parse_caging_mode(const std::string& text);

struct Witness {
  FockState initial;
  std::vector<FockState> unreachable;
  std::vector<int> frozen_sites;
};

struct CagingReport {
  int n_particles = 0;
  Partition partition;
  CagingMode mode = CagingMode::HardcoreLimit;
  CagingClass classification = CagingClass::NotCaged;
  /// Initial states showing an unreachable state or a frozen site.
  std::vector<Witness> witnesses;

  /// {n, partition, mode, classification, witnesses:[{initial, unreachable, frozen_sites}]}
  /// with site labels for frozen sites.
  std::string to_json(const LatticeSpec& spec) const;
};

struct CagingOptions {
  double reach_tol = 1e-9;
  double frozen_tol = 1e-9;
  int grid_points = 801;
};

/// Hermitian effective Hamiltonian of a partition subspace: the eigenvectors
/// of the full n-particle Hamiltonian that live mostly on the partition are
/// mapped back onto it by symmetric orthonormalisation, and the mean diagonal
/// is removed. Needs nonzero interactions; throws std::runtime_error when
/// the partition does not separate from the rest of the spectrum.
HermitianMatrix partition_effective_hamiltonian(const Eigensystem& full, std::span<const std::size_t> indices);

/// Scans every Fock state of partition `p`. In hardcore_limit mode the
/// dynamics is restricted to the partition through its effective Hamiltonian
/// and unreachable states are reported within the partition. In finite_U mode
/// the full n-particle Hamiltonian is used.
CagingReport classify_partition(const LatticeSpec& spec, int n, const Partition& p, CagingMode mode,
                                const CagingOptions& opts = {});

/// Every partition of n particles, in partitions_of order.
std::vector<CagingReport> classify_all(const LatticeSpec& spec, int n, CagingMode mode,
                                       const CagingOptions& opts = {});

/// Image of an L,T,B,R plaquette state under the 180-degree rotation
/// (L<->R, T<->B). Throws unless the state has four sites.
FockState rotate_180(const FockState& occ);

struct PartnerResult {
  std::optional<FockState> partner;
  bool is_rotation_image = false;
};

/// The single state that `initial` can never reach inside its partition
/// (hardcore_limit dynamics), if exactly one exists.
PartnerResult caged_partner(const LatticeSpec& spec, const FockState& initial, const CagingOptions& opts = {});

/// Prediction for n = 2 mod 4 on a plaquette: two extra particles on a
/// uniformly filled background behave like the n=2 particle-particle case,
/// so the partition [m+1, m+1, m, m] (m = (n-2)/4) is Fock-space caged.
struct ConjectureCheck {
  int n_particles = 0;
  Partition partition;
  CagingClass observed = CagingClass::NotCaged;
  bool holds = false;
};

ConjectureCheck even_n_conjecture(const LatticeSpec& spec, int n, const CagingOptions& opts = {});

}  // namespace abcage
