#include "abcage/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abcage/hamiltonian.hpp"

namespace abcage {

NoiseParams NoiseParams::from_lattice(const LatticeSpec& spec) {
  NoiseParams out;
  for (const auto& s : spec.sites()) out.sites.push_back({s.t1_01, s.t1_12, s.tphi});
  return out;
}

NoiseParams NoiseParams::uniform(int n_sites, std::optional<double> t1, std::optional<double> tphi) {
  NoiseParams out;
  out.sites.assign(n_sites, SiteNoise{t1, std::nullopt, tphi});
  return out;
}

std::optional<double> NoiseParams::shortest_time() const {
  std::optional<double> best;
  for (const auto& s : sites) {
    for (const auto& t : {s.t1_01, s.t1_12, s.tphi}) {
      if (t && (!best || *t < *best)) best = *t;
    }
  }
  return best;
}

SectorBasis::SectorBasis(int n_sites, int max_particles, std::optional<int> max_occ)
    : n_sites_(n_sites), max_particles_(max_particles) {
  if (max_particles < 0) throw std::invalid_argument("SectorBasis: negative particle number");
  for (int n = 0; n <= max_particles; ++n) {
    sectors_.emplace_back(n_sites, n, max_occ);
    offsets_.push_back(states_.size());
    const auto& st = sectors_.back().states();
    states_.insert(states_.end(), st.begin(), st.end());
  }
}

std::optional<std::size_t> SectorBasis::find(const FockState& occ) const {
  if (static_cast<int>(occ.size()) != n_sites_) return std::nullopt;
  int n = 0;
  for (int k : occ) n += k;
  if (n > max_particles_) return std::nullopt;
  if (auto i = sectors_[n].find(occ)) return offsets_[n] + *i;
  return std::nullopt;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) throw std::invalid_argument("DensityMatrix: not square");
  const std::complex<double> tr = rho_.trace();
  if (std::abs(tr - 1.0) > 1e-8) throw std::invalid_argument("DensityMatrix: trace is not 1");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-8) throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const SectorBasis& basis, const FockState& occ) {
  auto idx = basis.find(occ);
  if (!idx) throw std::invalid_argument("DensityMatrix::pure: " + format_state(occ) + " is not in the basis");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  psi[static_cast<Eigen::Index>(*idx)] = 1.0;
  return from_state(psi);
}

DensityMatrix DensityMatrix::from_state(const Eigen::VectorXcd& psi) { return DensityMatrix(psi * psi.adjoint()); }

Eigen::MatrixXcd sector_hamiltonian(const LatticeSpec& spec, const SectorBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n <= basis.max_particles(); ++n) {
    const auto block = build_hamiltonian(spec, basis.sectors()[n]);
    const auto off = static_cast<Eigen::Index>(basis.offset(n));
    h.block(off, off, block.dim(), block.dim()) = block.matrix();
  }
  return h;
}

namespace {

// Jump operator with at most one entry per row and column, so that
// C rho C^+ costs O(nnz^2).
struct Jump {
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  std::vector<double> values;  // includes sqrt(rate)
};

class Generator {
 public:
  Generator(const LatticeSpec& spec, const SectorBasis& basis, const NoiseParams& noise) {
    if (static_cast<int>(noise.sites.size()) != spec.n_sites()) {
      throw std::invalid_argument("lindblad_evolve: noise parameters do not match site count");
    }
    // A common on-site frequency commutes with everything and only rotates
    // coherences between particle-number sectors; drop it.
    double omega_mean = 0.0;
    for (const auto& s : spec.sites()) omega_mean += s.omega;
    omega_mean /= spec.n_sites();
    auto sites = spec.sites();
    for (auto& s : sites) s.omega -= omega_mean;
    h_ = sector_hamiltonian(spec.with_sites(sites), basis);

    const auto d = static_cast<Eigen::Index>(basis.size());
    const auto& states = basis.states();
    Eigen::VectorXd k_diag = Eigen::VectorXd::Zero(d);
    weights_ = Eigen::MatrixXd::Zero(d, d);

    for (int i = 0; i < spec.n_sites(); ++i) {
      const auto& sn = noise.sites[i];
      if (sn.t1_01) {
        const double g01 = 1.0 / *sn.t1_01;
        const double g12 = sn.t1_12 ? 1.0 / *sn.t1_12 : 2.0 * g01;
        Jump jump;
        Jump upper;  // separate |1><2| channel when overridden
        for (Eigen::Index col = 0; col < d; ++col) {
          const int n = states[col][i];
          if (n == 0) continue;
          FockState lowered = states[col];
          lowered[i] -= 1;
          const auto row = static_cast<Eigen::Index>(*basis.find(lowered));
          double rate = g01 * n;  // |b|^2 scaling
          Jump* target = &jump;
          if (sn.t1_12 && n == 2) {
            rate = g12;
            target = &upper;
          } else if (sn.t1_12 && n == 1) {
            rate = g01;
          }
          target->rows.push_back(row);
          target->cols.push_back(col);
          target->values.push_back(std::sqrt(rate));
          k_diag[col] += rate;
        }
        if (!jump.rows.empty()) jumps_.push_back(std::move(jump));
        if (!upper.rows.empty()) jumps_.push_back(std::move(upper));
      }
      if (sn.tphi) {
        const double gphi = 2.0 / *sn.tphi;
        for (Eigen::Index a = 0; a < d; ++a) {
          for (Eigen::Index b = 0; b < d; ++b) {
            const double dn = states[a][i] - states[b][i];
            weights_(a, b) -= 0.5 * gphi * dn * dn;
          }
        }
      }
    }
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) weights_(a, b) -= 0.5 * (k_diag[a] + k_diag[b]);
    }
  }

  const Eigen::MatrixXcd& hamiltonian() const { return h_; }

  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    const std::complex<double> minus_i(0.0, -1.0);
    out.noalias() = minus_i * (h_ * rho);
    out.noalias() -= minus_i * (rho * h_);
    out += weights_.cast<std::complex<double>>().cwiseProduct(rho);
    for (const auto& j : jumps_) {
      const std::size_t m = j.rows.size();
      for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
          out(j.rows[x], j.rows[y]) += j.values[x] * j.values[y] * rho(j.cols[x], j.cols[y]);
        }
      }
    }
  }

 private:
  Eigen::MatrixXcd h_;
  Eigen::MatrixXd weights_;
  std::vector<Jump> jumps_;
};

class Rk4 {
 public:
  explicit Rk4(const Generator& gen, Eigen::Index d)
      : gen_(gen), k1_(d, d), k2_(d, d), k3_(d, d), k4_(d, d), tmp_(d, d) {}

  void step(Eigen::MatrixXcd& rho, double h) {
    gen_.apply(rho, k1_);
    tmp_ = rho + (0.5 * h) * k1_;
    gen_.apply(tmp_, k2_);
    tmp_ = rho + (0.5 * h) * k2_;
    gen_.apply(tmp_, k3_);
    tmp_ = rho + h * k3_;
    gen_.apply(tmp_, k4_);
    rho += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  void advance(Eigen::MatrixXcd& rho, double span, double dt) {
    if (span <= 0.0) return;
    const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
    const double h = span / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) step(rho, h);
  }

 private:
  const Generator& gen_;
  Eigen::MatrixXcd k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

LindbladResult lindblad_evolve(const LatticeSpec& spec, const SectorBasis& basis, const DensityMatrix& rho0,
                               std::span<const double> times, const NoiseParams& noise,
                               const LindbladOptions& options) {
  if (spec.n_sites() != basis.n_sites()) throw std::invalid_argument("lindblad_evolve: basis/lattice mismatch");
  if (static_cast<std::size_t>(rho0.dim()) != basis.size()) {
    throw std::invalid_argument("lindblad_evolve: density matrix dimension does not match basis");
  }
  if (times.empty()) throw std::invalid_argument("lindblad_evolve: empty time grid");
  if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end())) {
    throw std::invalid_argument("lindblad_evolve: times must be ascending and non-negative");
  }

  const Generator gen(spec, basis, noise);
  const auto d = rho0.dim();

  double dt = 0.0;
  if (options.dt) {
    dt = *options.dt;
  } else {
    dt = times.back() > 0.0 ? times.back() / 100.0 : 1.0;
    if (!spec.bonds().empty()) dt = std::min(dt, swap_time(spec) / 200.0);
    if (auto tmin = noise.shortest_time()) dt = std::min(dt, *tmin / 1000.0);
    const double hnorm = gen.hamiltonian().cwiseAbs().rowwise().sum().maxCoeff();
    if (hnorm > 0.0) dt = std::min(dt, 0.1 / hnorm);
  }
  if (!(dt > 0.0)) throw std::invalid_argument("lindblad_evolve: step size must be positive");

  Rk4 rk(gen, d);
  // Step-halving check on a probe window at the start of the run.
  if (times.back() > 0.0) {
    bool converged = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving) {
      const double probe = std::min(times.back(), 100.0 * dt);
      Eigen::MatrixXcd coarse = rho0.matrix();
      Eigen::MatrixXcd fine = rho0.matrix();
      rk.advance(coarse, probe, dt);
      rk.advance(fine, probe, dt / 2.0);
      if ((coarse - fine).cwiseAbs().maxCoeff() <= options.convergence_tol) {
        converged = true;
        break;
      }
      dt /= 2.0;
    }
    if (!converged) throw std::runtime_error("lindblad_evolve: step-size check failed after halving");
  }

  LindbladResult out;
  out.dt = dt;
  ObservableRecorder recorder(spec, options.observables);
  Eigen::MatrixXcd rho = rho0.matrix();
  double now = 0.0;
  std::vector<double> probs(basis.size());
  for (double t : times) {
    rk.advance(rho, t - now, dt);
    now = t;
    for (Eigen::Index a = 0; a < d; ++a) probs[a] = rho(a, a).real();
    recorder.record(probs, basis.states());
    if (options.diagnostics) {
      out.trace.push_back(rho.trace().real());
      out.hermiticity_error.push_back((rho - rho.adjoint()).cwiseAbs().maxCoeff());
      const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
      out.min_eigenvalue.push_back(solver.eigenvalues().minCoeff());
    }
  }
  out.evolution.times.assign(times.begin(), times.end());
  out.evolution.tau_swap = spec.bonds().empty() ? 0.0 : swap_time(spec);
  out.evolution.series = recorder.take();
  return out;
}

std::vector<double> two_site_envelope(double t, double t1_l, double t1_b, double tphi,
                                      std::span<const double> times) {
  if (!(t1_l > 0.0) || !(t1_b > 0.0) || !(tphi > 0.0)) {
    throw std::invalid_argument("two_site_envelope: times must be positive");
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double tau : times) {
    const double decay = std::exp(-tau / (2.0 * t1_l) - tau / (2.0 * t1_b));
    out.push_back(0.5 * std::cos(2.0 * t * tau) * decay * std::exp(-tau / tphi) + 0.5 * decay);
  }
  return out;
}

}  // namespace abcage
