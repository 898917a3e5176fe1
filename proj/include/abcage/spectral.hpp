#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "abcage/hamiltonian.hpp"
#include "abcage/lattice.hpp"

namespace abcage {

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
struct Eigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  /// Eigenvalues closer than this are treated as one degenerate level.
  double degeneracy_tol = 0.0;

  Eigen::Index dim() const { return values.size(); }

  /// Consecutive runs of eigenvalue indices whose neighbouring gaps are at
  /// most degeneracy_tol.
  std::vector<std::vector<Eigen::Index>> degenerate_groups() const;
};

/// Default degeneracy tolerance 1e-8 * max|E|.
double default_degeneracy_tol(const Eigen::VectorXd& values);

/// Full Hermitian eigendecomposition.
Eigensystem eigendecompose(const HermitianMatrix& h);

/// Energies of the n-particle sector relative to the vacuum (rad/us).
std::vector<double> spectroscopy_lines(const LatticeSpec& spec, int n_particles);

/// Bands of the infinite rhombus chain (one spinal site, two caps per cell).
struct BandSet {
  std::vector<double> k;                    // in [-pi, pi]
  std::array<std::vector<double>, 3> bands;  // ascending at each k, rad/us
  double flux = 0.0;                        // radians per plaquette
};

/// Uniform |t|; the flux phase sits on the top cap to next-spinal bond.
BandSet bloch_bands(double flux, double t, int k_count);

/// max - min of each band.
std::array<double, 3> flatness(const BandSet& bands);

/// CSV with columns k,E1,E2,E3; energies multiplied by `energy_scale`.
void write_bands_csv(std::ostream& os, const BandSet& bands, double energy_scale = 1.0);

struct ClsCheck {
  bool is_eigenstate = false;
  double energy = 0.0;  // <psi|H|psi>, rad/us
  double residual = 0.0;  // |H psi - E psi|
  int support_size = 0;
};

/// Checks whether a single-particle amplitude vector is an eigenstate of
/// the lattice. Throws std::invalid_argument unless |psi| = 1.
ClsCheck verify_cls(const LatticeSpec& spec, std::span<const std::complex<double>> amplitudes, double tol);

struct EnergyGroups {
  /// m -> eigenvalue indices within window*|U| of m*U.
  std::map<int, std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> unassigned;
};

/// Groups eigenvalues (minus `offset`, typically n*omega) by the nearest
/// integer multiple of U.
EnergyGroups eigenenergy_groups(const Eigensystem& eigs, double U, double window, double offset = 0.0);

}  // namespace abcage
