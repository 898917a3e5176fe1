#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcage/dynamics.hpp"

namespace abcage {

/// Row-stochastic readout map: rows are true outcomes, columns reported
/// outcomes. Rows must sum to 1 within 1e-12 and entries lie in [0, 1].
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(Eigen::MatrixXd m);

  /// Two outcomes, each read correctly with probability `fidelity`.
  static ConfusionMatrix symmetric(double fidelity);
  static ConfusionMatrix identity(int n_outcomes);
  /// Joint readout of two independent sites; outcome (x, y) has index
  /// x * b.n_outcomes() + y.
  static ConfusionMatrix tensor(const ConfusionMatrix& a, const ConfusionMatrix& b);

  int n_outcomes() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int true_outcome, int reported) const { return m_(true_outcome, reported); }

  /// Reported distribution for a true distribution.
  std::vector<double> apply(std::span<const double> true_probs) const;

 private:
  Eigen::MatrixXd m_;
};

inline constexpr double kDefaultFidelity01 = 0.86;
inline constexpr double kDefaultFidelity12 = 0.80;

struct ShotRecord {
  std::vector<long> counts;  // per reported outcome
  long n_shots = 0;

  std::vector<double> frequencies() const;
};

/// Draws n_shots outcomes from confusion^T * true_probs with a
/// std::mt19937_64 seeded by `seed`. Each shot takes one 53-bit uniform
/// (rng() >> 11) * 2^-53 and inverts the cumulative distribution.
/// Throws std::invalid_argument unless true_probs is a distribution of the
/// matrix's size (sum within 1e-9, entries >= -1e-12).
ShotRecord sample_shots(std::span<const double> true_probs, const ConfusionMatrix& confusion, long n_shots,
                        std::uint64_t seed);

/// Solves confusion^T p = f, clips negatives to 0 and renormalises.
/// Throws std::invalid_argument for a singular matrix.
std::vector<double> correct_readout(const ShotRecord& record, const ConfusionMatrix& confusion);
std::vector<double> correct_frequencies(std::span<const double> freqs, const ConfusionMatrix& confusion);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
/// x with I_x(a, b) = q, by bisection to 1e-12.
double beta_quantile(double q, double a, double b);

/// Exact binomial interval for k successes in n trials at level 1 - alpha.
Interval clopper_pearson(long k, long n, double alpha);

/// Binary readout: maps an interval on the reported probability of outcome 1
/// to the true probability via p = (q - M01) / (M11 - M01), clipped to [0, 1].
Interval correct_interval(const Interval& reported, const ConfusionMatrix& confusion);

/// Interval on one outcome of a multi-outcome record: the outcome's reported
/// frequency is moved to each raw bound (other outcomes rescaled to fill the
/// rest), each variant is corrected, and the extreme corrected values kept.
Interval correct_outcome_interval(const ShotRecord& record, const ConfusionMatrix& confusion, int outcome,
                                  double alpha);

/// SplitMix64 mix of a base seed with two stream indices.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

struct ReadoutParams {
  long shots = 3000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  double fidelity_01 = kDefaultFidelity01;
  double fidelity_12 = kDefaultFidelity12;
};

/// Emulated measurements of every probability series in `evolution`
/// (P1_<site>, P2_<site>, PP_<a>_<b>). For each one the output holds
/// <obs> (true), <obs>_raw, <obs>_corr, <obs>_lo and <obs>_hi.
/// P1 uses the 0/1 matrix, P2 the 1/2 matrix as a "2 or not" readout, and
/// pair probabilities the tensor product of two 0/1 matrices.
EvolutionResult readout_pipeline(const EvolutionResult& evolution, const ReadoutParams& params);

}  // namespace abcage
