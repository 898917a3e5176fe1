#include "abcage/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "abcage/fock_basis.hpp"

namespace abcage {

std::vector<std::vector<Eigen::Index>> Eigensystem::degenerate_groups() const {
  std::vector<std::vector<Eigen::Index>> out;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!out.empty() && values[k] - values[out.back().back()] <= degeneracy_tol) {
      out.back().push_back(k);
    } else {
      out.push_back({k});
    }
  }
  return out;
}

double default_degeneracy_tol(const Eigen::VectorXd& values) {
  const double scale = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  // Floor keeps exactly degenerate zero spectra grouped despite round-off.
  return std::max(1e-8 * scale, 1e-12);
}

Eigensystem eigendecompose(const HermitianMatrix& h) {
  Eigensystem eigs;
  if (h.dim() == 0) return eigs;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver did not converge");
  eigs.values = solver.eigenvalues();
  eigs.vectors = solver.eigenvectors();
  eigs.degeneracy_tol = default_degeneracy_tol(eigs.values);
  return eigs;
}

std::vector<double> spectroscopy_lines(const LatticeSpec& spec, int n_particles) {
  if (n_particles < 1) throw std::invalid_argument("spectroscopy_lines: need at least one particle");
  const auto vacuum = eigendecompose(build_hamiltonian(spec, FockBasis(spec.n_sites(), 0)));
  const auto sector = eigendecompose(build_hamiltonian(spec, FockBasis(spec.n_sites(), n_particles)));
  std::vector<double> lines(sector.values.size());
  for (Eigen::Index k = 0; k < sector.values.size(); ++k) lines[k] = sector.values[k] - vacuum.values[0];
  return lines;
}

BandSet bloch_bands(double flux, double t, int k_count) {
  if (k_count < 2) throw std::invalid_argument("bloch_bands: need at least two k points");
  if (!(t > 0.0)) throw std::invalid_argument("bloch_bands: tunneling must be positive");
  using cd = std::complex<double>;
  BandSet out;
  out.flux = flux;
  for (auto& b : out.bands) b.reserve(k_count);
  for (int i = 0; i < k_count; ++i) {
    const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / (k_count - 1);
    out.k.push_back(k);
    // Basis (spinal A, top cap T, bottom cap B) of cell x. The caps couple
    // to A_x directly and to A_{x+1} through the Bloch phase e^{ik}.
    const cd h_ta = -t * (1.0 + std::exp(cd(0.0, k + flux)));
    const cd h_ba = -t * (1.0 + std::exp(cd(0.0, k)));
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(1, 0) = h_ta;
    h(0, 1) = std::conj(h_ta);
    h(2, 0) = h_ba;
    h(0, 2) = std::conj(h_ba);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(h, Eigen::EigenvaluesOnly);
    for (int b = 0; b < 3; ++b) out.bands[b].push_back(solver.eigenvalues()[b]);
  }
  return out;
}

std::array<double, 3> flatness(const BandSet& bands) {
  std::array<double, 3> out{};
  for (int b = 0; b < 3; ++b) {
    const auto& e = bands.bands[b];
    if (e.empty()) continue;
    auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    out[b] = *hi - *lo;
  }
  return out;
}

void write_bands_csv(std::ostream& os, const BandSet& bands, double energy_scale) {
  os.precision(12);
  os << "k,E1,E2,E3\n";
  for (std::size_t i = 0; i < bands.k.size(); ++i) {
    os << bands.k[i];
    for (int b = 0; b < 3; ++b) os << ',' << bands.bands[b][i] * energy_scale;
    os << '\n';
  }
}

ClsCheck verify_cls(const LatticeSpec& spec, std::span<const std::complex<double>> amplitudes, double tol) {
  if (static_cast<int>(amplitudes.size()) != spec.n_sites()) {
    throw std::invalid_argument("verify_cls: amplitude count does not match site count");
  }
  Eigen::VectorXcd psi(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) psi[static_cast<Eigen::Index>(i)] = amplitudes[i];
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("verify_cls: amplitudes are not normalized");

  // Single-particle basis states are ordered site 0 first.
  const HermitianMatrix h = build_hamiltonian(spec, FockBasis(spec.n_sites(), 1));
  const Eigen::VectorXcd h_psi = h.matrix() * psi;
  ClsCheck out;
  out.energy = psi.dot(h_psi).real();
  out.residual = (h_psi - out.energy * psi).norm();
  out.is_eigenstate = out.residual <= tol;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi[i]) > tol) ++out.support_size;
  }
  return out;
}

EnergyGroups eigenenergy_groups(const Eigensystem& eigs, double U, double window, double offset) {
  if (U == 0.0) throw std::invalid_argument("eigenenergy_groups: U must be nonzero");
  EnergyGroups out;
  for (Eigen::Index k = 0; k < eigs.values.size(); ++k) {
    const double x = (eigs.values[k] - offset) / U;
    const double m = std::round(x);
    if (std::abs(x - m) <= window) {
      out.groups[static_cast<int>(m)].push_back(k);
    } else {
      out.unassigned.push_back(k);
    }
  }
  return out;
}

}  // namespace abcage
