#include "abcage/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace abcage {

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m, double rel_tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("HermitianMatrix: matrix is not square");
  const double scale = std::max(1.0, max_abs());
  const double dev = m_.size() ? (m_ - m_.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (dev > rel_tol * scale) {
    throw std::invalid_argument("HermitianMatrix: matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
}

double HermitianMatrix::max_abs() const { return m_.size() ? m_.cwiseAbs().maxCoeff() : 0.0; }

HermitianMatrix build_hamiltonian(const LatticeSpec& spec, const FockBasis& basis) {
  if (spec.n_sites() != basis.n_sites()) {
    throw std::invalid_argument("build_hamiltonian: lattice has " + std::to_string(spec.n_sites()) +
                                " sites but basis has " + std::to_string(basis.n_sites()));
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const int cap = basis.max_occ();

  for (Eigen::Index col = 0; col < dim; ++col) {
    const FockState& occ = basis[col];
    double diag = 0.0;
    for (int i = 0; i < spec.n_sites(); ++i) {
      const double n = occ[i];
      diag += spec.site(i).omega * n + 0.5 * spec.site(i).U * n * (n - 1.0);
    }
    h(col, col) = diag;

    FockState moved = occ;
    for (const auto& bond : spec.bonds()) {
      // Move one particle src -> dst in both directions along the bond.
      for (auto [src, dst] : {std::pair{bond.j, bond.i}, std::pair{bond.i, bond.j}}) {
        if (occ[src] == 0 || occ[dst] + 1 > cap) continue;
        moved[src] -= 1;
        moved[dst] += 1;
        const auto row = static_cast<Eigen::Index>(state_index(basis, moved));
        h(row, col) += -bond.t * std::sqrt(static_cast<double>(occ[src]) * (occ[dst] + 1));
        moved[src] += 1;
        moved[dst] -= 1;
      }
    }
  }
  return HermitianMatrix(std::move(h));
}

const AdjacencyEdge* AdjacencyGraph::find_edge(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges) {
    if (e.a == a && e.b == b) return &e;
  }
  return nullptr;
}

AdjacencyGraph adjacency_graph(const LatticeSpec& spec, const FockBasis& basis,
                               std::optional<std::vector<std::size_t>> restrict_to) {
  const HermitianMatrix h = build_hamiltonian(spec, basis);
  std::vector<std::size_t> nodes;
  if (restrict_to) {
    nodes = *restrict_to;
    for (auto i : nodes) {
      if (i >= basis.size()) throw std::invalid_argument("adjacency_graph: restricted index out of range");
    }
  } else {
    nodes.resize(basis.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
  }

  AdjacencyGraph graph;
  for (auto i : nodes) graph.nodes.push_back({i, "occ=" + format_state(basis[i])});
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    for (std::size_t y = x + 1; y < nodes.size(); ++y) {
      const auto a = std::min(nodes[x], nodes[y]);
      const auto b = std::max(nodes[x], nodes[y]);
      const auto w = h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (std::abs(w) > 0.0) graph.edges.push_back({a, b, w.real()});
    }
  }
  return graph;
}

void write_edge_list(std::ostream& os, const AdjacencyGraph& graph, double scale) {
  auto label_of = [&](std::size_t idx) -> const std::string& {
    for (const auto& n : graph.nodes) {
      if (n.index == idx) return n.label;
    }
    throw std::logic_error("write_edge_list: edge references unknown node");
  };
  os.precision(12);
  for (const auto& e : graph.edges) {
    os << label_of(e.a) << ' ' << label_of(e.b) << ' ' << e.weight * scale << '\n';
  }
}

HermitianMatrix project_subspace(const HermitianMatrix& h, std::span<const std::size_t> indices) {
  std::set<std::size_t> seen;
  for (auto i : indices) {
    if (i >= static_cast<std::size_t>(h.dim())) throw std::invalid_argument("project_subspace: index out of range");
    if (!seen.insert(i).second) throw std::invalid_argument("project_subspace: duplicate index " + std::to_string(i));
  }
  const auto d = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXcd sub(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      sub(r, c) = h(static_cast<Eigen::Index>(indices[r]), static_cast<Eigen::Index>(indices[c]));
    }
  }
  return HermitianMatrix(std::move(sub));
}

}  // namespace abcage
