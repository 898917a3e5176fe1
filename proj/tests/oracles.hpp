#pragma once

// Reference computations that share no code with the library: brute-force
// enumeration, matrix elements from the occupation difference of two
// states, closed-form spectra, binomial tail sums, and a dense Liouvillian.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "abcage/lattice.hpp"

namespace oracle {

using cd = std::complex<double>;
using State = std::vector<int>;

inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Every occupation vector in [0, cap]^S with the right total, sorted
/// descending.
inline std::vector<State> enumerate(int sites, int n, int cap) {
  std::vector<State> out;
  State s(sites, 0);
  while (true) {
    int total = 0;
    for (int x : s) total += x;
    if (total == n) out.push_back(s);
    int pos = 0;
    while (pos < sites && s[pos] == cap) s[pos++] = 0;
    if (pos == sites) break;
    ++s[pos];
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// <a|H|b> from the occupation difference of a and b.
inline double matrix_element(const abcage::LatticeSpec& spec, const State& a, const State& b) {
  const int sites = static_cast<int>(a.size());
  std::vector<int> diff;
  for (int i = 0; i < sites; ++i) {
    if (a[i] != b[i]) diff.push_back(i);
  }
  if (diff.empty()) {
    double e = 0.0;
    for (int i = 0; i < sites; ++i) e += spec.site(i).omega * a[i] + 0.5 * spec.site(i).U * a[i] * (a[i] - 1);
    return e;
  }
  if (diff.size() != 2) return 0.0;
  int up = diff[0];
  int down = diff[1];
  if (a[up] - b[up] != 1) std::swap(up, down);
  if (a[up] - b[up] != 1 || b[down] - a[down] != 1) return 0.0;
  for (const auto& bond : spec.bonds()) {
    if ((bond.i == up && bond.j == down) || (bond.i == down && bond.j == up)) {
      // b_up^+ b_down acting on |b>
      return -bond.t * std::sqrt(static_cast<double>(b[down]) * (b[up] + 1));
    }
  }
  return 0.0;
}

inline Eigen::MatrixXd hamiltonian(const abcage::LatticeSpec& spec, const std::vector<State>& states) {
  const auto d = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd h(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) h(r, c) = matrix_element(spec, states[r], states[c]);
  }
  return h;
}

/// Exact hop rate of a doublon between two sites: half the splitting of the
/// two doublon-like eigenstates of the 3-state problem {|20>, |11>, |02>}.
inline double doublon_rate(double t, double U) { return (std::sqrt(U * U + 16.0 * t * t) - std::abs(U)) / 4.0; }

/// P(X <= k) for X ~ Binomial(n, p), summed in log space.
inline double binomial_cdf(long k, long n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  double sum = 0.0;
  for (long i = 0; i <= k; ++i) {
    const double lg = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * std::log(p) +
                      (n - i) * std::log1p(-p);
    sum += std::exp(lg);
  }
  return std::min(sum, 1.0);
}

/// Clopper-Pearson bounds from binomial tail sums and bisection.
inline std::pair<double, double> clopper_pearson_tails(long k, long n, double alpha) {
  auto solve = [](auto f, double target) {
    // f decreasing in p
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (f(mid) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  double lo = 0.0, hi = 1.0;
  // lower: P(X >= k | p) = alpha/2, increasing in p
  if (k > 0) lo = solve([&](double p) { return binomial_cdf(k - 1, n, p); }, 1.0 - alpha / 2.0);
  // upper: P(X <= k | p) = alpha/2, decreasing in p
  if (k < n) hi = solve([&](double p) { return binomial_cdf(k, n, p); }, alpha / 2.0);
  return {lo, hi};
}

inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXcd a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) a(r, c) = cd(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

/// Column-stacked Lindblad superoperator for H and collapse operators C_k
/// (rates folded into C_k).
inline Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& h, const std::vector<Eigen::MatrixXcd>& collapse) {
  const auto d = h.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
  };
  // vec(A X B) = (B^T kron A) vec(X)
  Eigen::MatrixXcd l = cd(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& c : collapse) {
    const Eigen::MatrixXcd cdc = c.adjoint() * c;
    l += kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return l;
}

inline Eigen::MatrixXcd evolve_liouvillian(const Eigen::MatrixXcd& l, const Eigen::MatrixXcd& rho0, double t) {
  const auto d = rho0.rows();
  const Eigen::MatrixXcd prop = (l * t).exp();
  const Eigen::VectorXcd v = prop * Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
}

}  // namespace oracle
