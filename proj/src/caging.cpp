#include "abcage/caging.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "abcage/dynamics.hpp"
#include "abcage/units.hpp"

namespace abcage {

ReachabilityResult unreachable_states(const Eigensystem& eigs, std::size_t initial, double tol) {
  const auto d = eigs.dim();
  if (initial >= static_cast<std::size_t>(d)) throw std::out_of_range("unreachable_states: initial index out of range");
  const auto i = static_cast<Eigen::Index>(initial);

  ReachabilityResult out;
  out.initial = initial;
  out.max_amplitude.assign(d, 0.0);
  for (const auto& group : eigs.degenerate_groups()) {
    out.group_energies.push_back(eigs.values[group.front()]);
    // column j of P_k applied to e_i: sum over the group of v v^+
    Eigen::VectorXcd column = Eigen::VectorXcd::Zero(d);
    for (Eigen::Index k : group) column += eigs.vectors.col(k) * std::conj(eigs.vectors(i, k));
    for (Eigen::Index j = 0; j < d; ++j) {
      out.max_amplitude[j] = std::max(out.max_amplitude[j], std::abs(column[j]));
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    if (out.max_amplitude[j] < tol) out.unreachable.push_back(static_cast<std::size_t>(j));
  }
  return out;
}

std::vector<int> frozen_sites(const Eigensystem& eigs, std::span<const FockState> states, std::size_t initial,
                              std::span<const double> grid, double tol) {
  const auto d = eigs.dim();
  if (static_cast<std::size_t>(d) != states.size()) throw std::invalid_argument("frozen_sites: basis size mismatch");
  if (initial >= states.size()) throw std::out_of_range("frozen_sites: initial index out of range");
  if (grid.size() < 400) throw std::invalid_argument("frozen_sites: time grid needs at least 400 points");

  const auto n_sites = states.front().size();
  const FockState& start = states[initial];
  std::vector<double> deviation(n_sites, 0.0);
  const Eigen::VectorXcd overlaps = eigs.vectors.row(static_cast<Eigen::Index>(initial)).adjoint();
  Eigen::VectorXcd phased(d);
  for (double t : grid) {
    for (Eigen::Index k = 0; k < d; ++k) phased[k] = std::polar(1.0, -eigs.values[k] * t) * overlaps[k];
    const Eigen::VectorXd probs = (eigs.vectors * phased).cwiseAbs2();
    for (std::size_t s = 0; s < n_sites; ++s) {
      double occ = 0.0;
      for (Eigen::Index a = 0; a < d; ++a) occ += probs[a] * states[a][s];
      deviation[s] = std::max(deviation[s], std::abs(occ - start[s]));
    }
  }
  std::vector<int> out;
  for (std::size_t s = 0; s < n_sites; ++s) {
    if (deviation[s] < tol) out.push_back(static_cast<int>(s));
  }
  return out;
}

std::string to_string(CagingClass c) {
  switch (c) {
    case CagingClass::NotCaged:
      return "not_caged";
    case CagingClass::RealSpace:
      return "real_space";
    case CagingClass::FockSpace:
      return "fock_space";
  }
  return "unknown";
}

std::string to_string(CagingMode m) { return m == CagingMode::HardcoreLimit ? "hardcore_limit" : "finite_U"; }

CagingMode parse_caging_mode(const std::string& text) {
  if (text == "hardcore_limit") return CagingMode::HardcoreLimit;
  if (text == "finite_U") return CagingMode::FiniteU;
  throw std::invalid_argument("unknown caging mode '" + text + "' (expected hardcore_limit or finite_U)");
}

std::string CagingReport::to_json(const LatticeSpec& spec) const {
  nlohmann::ordered_json j;
  j["n"] = n_particles;
  j["partition"] = partition;
  j["mode"] = to_string(mode);
  j["classification"] = to_string(classification);
  auto list = nlohmann::ordered_json::array();
  for (const auto& w : witnesses) {
    nlohmann::ordered_json item;
    item["initial"] = w.initial;
    item["unreachable"] = w.unreachable;
    auto sites = nlohmann::ordered_json::array();
    for (int s : w.frozen_sites) sites.push_back(spec.label(s));
    item["frozen_sites"] = sites;
    list.push_back(item);
  }
  j["witnesses"] = list;
  return j.dump();
}

HermitianMatrix partition_effective_hamiltonian(const Eigensystem& full, std::span<const std::size_t> indices) {
  const auto m = static_cast<Eigen::Index>(indices.size());
  if (m == 0) throw std::invalid_argument("partition_effective_hamiltonian: empty subspace");
  const auto d = full.dim();
  for (std::size_t idx : indices) {
    if (idx >= static_cast<std::size_t>(d)) throw std::out_of_range("partition_effective_hamiltonian: index out of range");
  }

  std::vector<double> weight(d, 0.0);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (std::size_t idx : indices) weight[k] += std::norm(full.vectors(static_cast<Eigen::Index>(idx), k));
  }
  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return weight[a] > weight[b]; });
  order.resize(m);
  std::sort(order.begin(), order.end());
  for (Eigen::Index k : order) {
    if (weight[k] <= 0.5) {
      throw std::runtime_error("partition_effective_hamiltonian: partition not separated from the rest of the spectrum");
    }
  }

  Eigen::MatrixXcd a(m, m);
  Eigen::VectorXd e(m);
  for (Eigen::Index c = 0; c < m; ++c) {
    e[c] = full.values[order[c]];
    for (Eigen::Index r = 0; r < m; ++r) a(r, c) = full.vectors(static_cast<Eigen::Index>(indices[r]), order[c]);
  }
  const Eigen::MatrixXcd g = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g);
  const Eigen::MatrixXcd g_inv_sqrt =
      solver.eigenvectors() * solver.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
      solver.eigenvectors().adjoint();
  Eigen::MatrixXcd h = g_inv_sqrt * a * e.asDiagonal() * a.adjoint() * g_inv_sqrt;
  h = 0.5 * (h + h.adjoint()).eval();
  const std::complex<double> mean = h.trace() / static_cast<double>(m);
  h -= mean * Eigen::MatrixXcd::Identity(m, m);
  return HermitianMatrix(std::move(h));
}

namespace {

struct PartitionDynamics {
  Eigensystem eigs;
  std::vector<FockState> states;    // basis of `eigs`
  std::vector<std::size_t> scan;    // positions of the partition's states in `states`
  std::vector<double> grid;
};

PartitionDynamics partition_dynamics(const LatticeSpec& spec, int n, const Partition& p, CagingMode mode,
                                     const CagingOptions& opts) {
  const FockBasis basis(spec.n_sites(), n);
  const auto idx = subspace_indices(basis, p);
  if (idx.empty()) {
    throw std::invalid_argument("partition " + format_partition(p) + " is not valid for " + std::to_string(n) +
                                " particles on " + std::to_string(spec.n_sites()) + " sites");
  }
  const auto full = eigendecompose(build_hamiltonian(spec, basis));

  PartitionDynamics out;
  double tau = 1.0;
  double span = 0.0;
  if (mode == CagingMode::HardcoreLimit) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    const HermitianMatrix h =
        m == 1 ? HermitianMatrix(Eigen::MatrixXcd::Zero(1, 1)) : partition_effective_hamiltonian(full, idx);
    out.eigs = eigendecompose(h);
    for (std::size_t k : idx) out.states.push_back(basis[k]);
    out.scan.resize(idx.size());
    std::iota(out.scan.begin(), out.scan.end(), std::size_t{0});
    const double scale = h.max_abs();
    if (scale > 0.0) tau = kTwoPi / (4.0 * scale);
    span = 25.0 * tau;
  } else {
    out.eigs = full;
    out.states = basis.states();
    out.scan = idx;
    tau = swap_time(spec);
    double u_max = 0.0;
    for (const auto& s : spec.sites()) u_max = std::max(u_max, std::abs(s.U));
    span = 20.0 * tau * std::max(1.0, u_max / spec.mean_abs_tunneling());
  }
  out.grid = time_grid(span, std::max(opts.grid_points, 400));
  return out;
}

std::vector<Partition> partitions_for(int n_sites, int n) { return partitions_of(FockBasis(n_sites, n)); }

}  // namespace

CagingReport classify_partition(const LatticeSpec& spec, int n, const Partition& p, CagingMode mode,
                                const CagingOptions& opts) {
  const auto dyn = partition_dynamics(spec, n, p, mode, opts);
  CagingReport report;
  report.n_particles = n;
  report.partition = p;
  report.mode = mode;
  bool any_frozen = false;
  bool any_unreachable = false;
  for (std::size_t a : dyn.scan) {
    const auto reach = unreachable_states(dyn.eigs, a, opts.reach_tol);
    auto frozen = frozen_sites(dyn.eigs, dyn.states, a, dyn.grid, opts.frozen_tol);
    if (reach.unreachable.empty() && frozen.empty()) continue;
    Witness w;
    w.initial = dyn.states[a];
    for (std::size_t j : reach.unreachable) w.unreachable.push_back(dyn.states[j]);
    w.frozen_sites = std::move(frozen);
    any_frozen = any_frozen || !w.frozen_sites.empty();
    any_unreachable = any_unreachable || !w.unreachable.empty();
    report.witnesses.push_back(std::move(w));
  }
  if (any_frozen) {
    report.classification = CagingClass::RealSpace;
  } else if (any_unreachable) {
    report.classification = CagingClass::FockSpace;
  }
  return report;
}

std::vector<CagingReport> classify_all(const LatticeSpec& spec, int n, CagingMode mode, const CagingOptions& opts) {
  std::vector<CagingReport> out;
  for (const auto& p : partitions_for(spec.n_sites(), n)) out.push_back(classify_partition(spec, n, p, mode, opts));
  return out;
}

FockState rotate_180(const FockState& occ) {
  if (occ.size() != 4) throw std::invalid_argument("rotate_180: expected a four-site plaquette state");
  return {occ[3], occ[2], occ[1], occ[0]};
}

PartnerResult caged_partner(const LatticeSpec& spec, const FockState& initial, const CagingOptions& opts) {
  if (static_cast<int>(initial.size()) != spec.n_sites()) {
    throw std::invalid_argument("caged_partner: state does not match the lattice");
  }
  const int n = std::accumulate(initial.begin(), initial.end(), 0);
  const auto dyn = partition_dynamics(spec, n, partition_of(initial), CagingMode::HardcoreLimit, opts);
  const auto it = std::find(dyn.states.begin(), dyn.states.end(), initial);
  if (it == dyn.states.end()) throw std::invalid_argument("caged_partner: state not in its own partition");
  const auto reach = unreachable_states(dyn.eigs, static_cast<std::size_t>(it - dyn.states.begin()), opts.reach_tol);

  PartnerResult out;
  if (reach.unreachable.size() == 1) {
    out.partner = dyn.states[reach.unreachable.front()];
    out.is_rotation_image = initial.size() == 4 && *out.partner == rotate_180(initial);
  }
  return out;
}

ConjectureCheck even_n_conjecture(const LatticeSpec& spec, int n, const CagingOptions& opts) {
  if (spec.n_sites() != 4) throw std::invalid_argument("even_n_conjecture: needs a four-site plaquette");
  if (n < 2 || n % 4 != 2) throw std::invalid_argument("even_n_conjecture: n must be 2 mod 4");
  const int m = (n - 2) / 4;
  Partition p{m + 1, m + 1};
  if (m > 0) {
    p.push_back(m);
    p.push_back(m);
  }
  ConjectureCheck out;
  out.n_particles = n;
  out.partition = p;
  out.observed = classify_partition(spec, n, p, CagingMode::HardcoreLimit, opts).classification;
  out.holds = out.observed == CagingClass::FockSpace;
  return out;
}

}  // namespace abcage
