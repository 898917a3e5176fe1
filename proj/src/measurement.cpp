#include "abcage/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace abcage {

ConfusionMatrix::ConfusionMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() < 2 || m_.rows() != m_.cols()) {
    throw std::invalid_argument("ConfusionMatrix: need a square matrix with at least two outcomes");
  }
  for (Eigen::Index r = 0; r < m_.rows(); ++r) {
    for (Eigen::Index c = 0; c < m_.cols(); ++c) {
      if (!(m_(r, c) >= 0.0 && m_(r, c) <= 1.0)) throw std::invalid_argument("ConfusionMatrix: entry outside [0, 1]");
    }
    if (std::abs(m_.row(r).sum() - 1.0) > 1e-12) throw std::invalid_argument("ConfusionMatrix: row does not sum to 1");
  }
}

ConfusionMatrix ConfusionMatrix::symmetric(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw std::invalid_argument("ConfusionMatrix: fidelity outside [0, 1]");
  Eigen::MatrixXd m(2, 2);
  m << fidelity, 1.0 - fidelity, 1.0 - fidelity, fidelity;
  return ConfusionMatrix(m);
}

ConfusionMatrix ConfusionMatrix::identity(int n_outcomes) {
  return ConfusionMatrix(Eigen::MatrixXd::Identity(n_outcomes, n_outcomes));
}

ConfusionMatrix ConfusionMatrix::tensor(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  const int na = a.n_outcomes();
  const int nb = b.n_outcomes();
  Eigen::MatrixXd m(na * nb, na * nb);
  for (int x = 0; x < na; ++x) {
    for (int y = 0; y < nb; ++y) {
      for (int u = 0; u < na; ++u) {
        for (int v = 0; v < nb; ++v) m(x * nb + y, u * nb + v) = a(x, u) * b(y, v);
      }
    }
  }
  // Products of stochastic rows can miss 1 by an ulp or two.
  for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r) /= m.row(r).sum();
  return ConfusionMatrix(m);
}

std::vector<double> ConfusionMatrix::apply(std::span<const double> true_probs) const {
  if (static_cast<int>(true_probs.size()) != n_outcomes()) {
    throw std::invalid_argument("ConfusionMatrix::apply: size mismatch");
  }
  std::vector<double> out(true_probs.size(), 0.0);
  for (int r = 0; r < n_outcomes(); ++r) {
    for (int c = 0; c < n_outcomes(); ++c) out[c] += true_probs[r] * m_(r, c);
  }
  return out;
}

std::vector<double> ShotRecord::frequencies() const {
  if (n_shots <= 0) throw std::invalid_argument("ShotRecord: no shots");
  std::vector<double> out;
  out.reserve(counts.size());
  for (long c : counts) out.push_back(static_cast<double>(c) / static_cast<double>(n_shots));
  return out;
}

ShotRecord sample_shots(std::span<const double> true_probs, const ConfusionMatrix& confusion, long n_shots,
                        std::uint64_t seed) {
  if (n_shots <= 0) throw std::invalid_argument("sample_shots: shot count must be positive");
  if (static_cast<int>(true_probs.size()) != confusion.n_outcomes()) {
    throw std::invalid_argument("sample_shots: distribution size does not match confusion matrix");
  }
  double total = 0.0;
  for (double p : true_probs) {
    if (!(p >= -1e-12)) throw std::invalid_argument("sample_shots: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("sample_shots: probabilities do not sum to 1");

  std::vector<double> clipped(true_probs.begin(), true_probs.end());
  for (double& p : clipped) p = std::max(p, 0.0) / total;
  const auto reported = confusion.apply(clipped);
  std::vector<double> cdf(reported.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < reported.size(); ++i) {
    acc += reported[i];
    cdf[i] = acc;
  }

  std::mt19937_64 rng(seed);
  ShotRecord out;
  out.n_shots = n_shots;
  out.counts.assign(reported.size(), 0);
  for (long s = 0; s < n_shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::size_t k = 0;
    while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
    ++out.counts[k];
  }
  return out;
}

std::vector<double> correct_frequencies(std::span<const double> freqs, const ConfusionMatrix& confusion) {
  const int n = confusion.n_outcomes();
  if (static_cast<int>(freqs.size()) != n) throw std::invalid_argument("correct_readout: size mismatch");
  const Eigen::MatrixXd mt = confusion.matrix().transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(mt);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw std::invalid_argument("correct_readout: confusion matrix is singular");
  const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(freqs.data(), n);
  const Eigen::VectorXd p = lu.solve(f);
  std::vector<double> out(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = std::max(p[i], 0.0);
    total += out[i];
  }
  if (!(total > 0.0)) throw std::invalid_argument("correct_readout: corrected distribution vanished");
  for (double& x : out) x /= total;
  return out;
}

std::vector<double> correct_readout(const ShotRecord& record, const ConfusionMatrix& confusion) {
  return correct_frequencies(record.frequencies(), confusion);
}

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("regularized_incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("regularized_incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double beta_quantile(double q, double a, double b) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("beta_quantile: q outside [0, 1]");
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_incomplete_beta(a, b, mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Interval clopper_pearson(long k, long n, double alpha) {
  if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("clopper_pearson: need 0 <= k <= n and n > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("clopper_pearson: alpha outside (0, 1)");
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  Interval out;
  out.lo = k == 0 ? 0.0 : beta_quantile(alpha / 2.0, kd, nd - kd + 1.0);
  out.hi = k == n ? 1.0 : beta_quantile(1.0 - alpha / 2.0, kd + 1.0, nd - kd);
  return out;
}

Interval correct_interval(const Interval& reported, const ConfusionMatrix& confusion) {
  if (confusion.n_outcomes() != 2) throw std::invalid_argument("correct_interval: needs a two-outcome matrix");
  const double m01 = confusion(0, 1);
  const double m11 = confusion(1, 1);
  if (!(m11 - m01 > 1e-12)) throw std::invalid_argument("correct_interval: readout carries no information");
  auto map = [&](double q) { return std::clamp((q - m01) / (m11 - m01), 0.0, 1.0); };
  return {map(reported.lo), map(reported.hi)};
}

Interval correct_outcome_interval(const ShotRecord& record, const ConfusionMatrix& confusion, int outcome,
                                  double alpha) {
  const int n = confusion.n_outcomes();
  if (static_cast<int>(record.counts.size()) != n) throw std::invalid_argument("correct_outcome_interval: size mismatch");
  if (outcome < 0 || outcome >= n) throw std::out_of_range("correct_outcome_interval: outcome out of range");
  const auto freqs = record.frequencies();
  const Interval raw = clopper_pearson(record.counts[outcome], record.n_shots, alpha);
  const double rest = 1.0 - freqs[outcome];

  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (double q : {raw.lo, raw.hi}) {
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
      if (i == outcome) {
        f[i] = q;
      } else if (rest > 0.0) {
        f[i] = freqs[i] * (1.0 - q) / rest;
      } else {
        f[i] = (1.0 - q) / (n - 1);
      }
    }
    const double p = correct_frequencies(f, confusion)[outcome];
    out.lo = std::min(out.lo, p);
    out.hi = std::max(out.hi, p);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

namespace {

struct Channel {
  std::string name;
  const std::vector<double>* p = nullptr;   // target probability
  const std::vector<double>* pi = nullptr;  // pair only: P1 of each site
  const std::vector<double>* pj = nullptr;
};

}  // namespace

EvolutionResult readout_pipeline(const EvolutionResult& evolution, const ReadoutParams& params) {
  if (params.shots <= 0) throw std::invalid_argument("readout_pipeline: shot count must be positive");
  const auto m01 = ConfusionMatrix::symmetric(params.fidelity_01);
  const auto m12 = ConfusionMatrix::symmetric(params.fidelity_12);
  const auto m_pair = ConfusionMatrix::tensor(m01, m01);

  std::vector<Channel> channels;
  for (const auto& s : evolution.series) {
    if (s.name.rfind("P1_", 0) == 0 || s.name.rfind("P2_", 0) == 0) {
      channels.push_back({s.name, &s.values});
    } else if (s.name.rfind("PP_", 0) == 0) {
      const auto rest = s.name.substr(3);
      // Labels may contain '_', so try every split point.
      bool found = false;
      for (std::size_t cut = rest.find('_'); cut != std::string::npos; cut = rest.find('_', cut + 1)) {
        const std::string a = "P1_" + rest.substr(0, cut);
        const std::string b = "P1_" + rest.substr(cut + 1);
        if (evolution.has(a) && evolution.has(b)) {
          channels.push_back({s.name, &s.values, &evolution.get(a), &evolution.get(b)});
          found = true;
          break;
        }
      }
      if (!found) throw std::invalid_argument("readout_pipeline: pair series " + s.name + " needs P1 series");
    }
  }

  EvolutionResult out;
  out.times = evolution.times;
  out.tau_swap = evolution.tau_swap;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto& ch = channels[c];
    Series truth{ch.name, {}}, raw{ch.name + "_raw", {}}, corr{ch.name + "_corr", {}};
    Series lo{ch.name + "_lo", {}}, hi{ch.name + "_hi", {}};
    const bool pair = ch.pi != nullptr;
    const auto& binary = ch.name[1] == '2' ? m12 : m01;
    for (std::size_t k = 0; k < evolution.times.size(); ++k) {
      const double p = std::clamp((*ch.p)[k], 0.0, 1.0);
      const auto seed = derive_seed(params.seed, c, k);
      truth.values.push_back(p);
      if (pair) {
        const double a = (*ch.pi)[k];
        const double b = (*ch.pj)[k];
        std::vector<double> dist{std::max(1.0 - a - b + p, 0.0), std::max(b - p, 0.0), std::max(a - p, 0.0), p};
        double total = 0.0;
        for (double x : dist) total += x;
        for (double& x : dist) x /= total;
        const auto rec = sample_shots(dist, m_pair, params.shots, seed);
        raw.values.push_back(rec.frequencies()[3]);
        corr.values.push_back(correct_readout(rec, m_pair)[3]);
        const auto iv = correct_outcome_interval(rec, m_pair, 3, params.alpha);
        lo.values.push_back(iv.lo);
        hi.values.push_back(iv.hi);
      } else {
        const std::vector<double> dist{1.0 - p, p};
        const auto rec = sample_shots(dist, binary, params.shots, seed);
        raw.values.push_back(rec.frequencies()[1]);
        corr.values.push_back(correct_readout(rec, binary)[1]);
        const auto iv = correct_interval(clopper_pearson(rec.counts[1], rec.n_shots, params.alpha), binary);
        lo.values.push_back(iv.lo);
        hi.values.push_back(iv.hi);
      }
    }
    for (auto* s : {&truth, &raw, &corr, &lo, &hi}) out.series.push_back(std::move(*s));
  }
  return out;
}

}  // namespace abcage
