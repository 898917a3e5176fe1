#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcage/fock_basis.hpp"
#include "abcage/lattice.hpp"

namespace abcage {

/// Dense Hermitian matrix of energies (rad/us). Construction validates
/// Hermiticity to 1e-12 relative to the largest entry.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd m, double rel_tol = 1e-12);

  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  std::complex<double> operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// Largest absolute entry; the scale used for relative tolerances.
  double max_abs() const;

 private:
  Eigen::MatrixXcd m_;
};

/// Bose-Hubbard Hamiltonian
///   H = -sum_bonds t_ij (b_i^+ b_j + h.c.) + sum_i [omega_i n_i + U_i/2 n_i (n_i - 1)]
/// in the given fixed-number basis. Hops that would exceed the basis cap are
/// dropped, so a cap-1 basis yields the hard-core Hamiltonian.
HermitianMatrix build_hamiltonian(const LatticeSpec& spec, const FockBasis& basis);

struct AdjacencyNode {
  std::size_t index = 0;  // position in the basis
  std::string label;      // "occ=2,0,1,0"
};

struct AdjacencyEdge {
  std::size_t a = 0;  // basis indices, a < b
  std::size_t b = 0;
  double weight = 0.0;  // H_ab, rad/us
};

struct AdjacencyGraph {
  std::vector<AdjacencyNode> nodes;
  std::vector<AdjacencyEdge> edges;

  const AdjacencyEdge* find_edge(std::size_t a, std::size_t b) const;
};

/// Fock-space graph: one node per (restricted) basis state, an edge wherever
/// the Hamiltonian couples two states.
AdjacencyGraph adjacency_graph(const LatticeSpec& spec, const FockBasis& basis,
                               std::optional<std::vector<std::size_t>> restrict_to = std::nullopt);

/// Writes "node_a node_b weight" lines; weights are multiplied by `scale`.
void write_edge_list(std::ostream& os, const AdjacencyGraph& graph, double scale = 1.0);

/// Submatrix on `indices` (in the given order). Throws on duplicates or
/// out-of-range indices.
HermitianMatrix project_subspace(const HermitianMatrix& h, std::span<const std::size_t> indices);

}  // namespace abcage
