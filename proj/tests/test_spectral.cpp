#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "abcage/spectral.hpp"
#include "abcage/units.hpp"
#include "oracles.hpp"

using namespace abcage;

TEST(Spectral, DiagonalMatrix) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = -1.0;
  m(2, 2) = 2.0;
  const auto eigs = eigendecompose(HermitianMatrix(m));
  EXPECT_DOUBLE_EQ(eigs.values[0], -1.0);
  EXPECT_DOUBLE_EQ(eigs.values[1], 2.0);
  EXPECT_DOUBLE_EQ(eigs.values[2], 3.0);
  EXPECT_NEAR(std::abs(eigs.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(eigs.vectors(2, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(eigs.vectors(0, 2)), 1.0, 1e-15);
}

TEST(Spectral, PlaquetteSingleParticleSpectra) {
  const double t = 2.3;
  const double w = 5.0;
  const auto zero = eigendecompose(
      build_hamiltonian(plaquette(Flux::Zero, PlaquetteTunnelings::uniform(t), w, 0.0), FockBasis(4, 1)));
  const std::vector<double> z{-2 * t, 0, 0, 2 * t};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(zero.values[k] - w, z[k], 1e-12);
  const auto pi = eigendecompose(
      build_hamiltonian(plaquette(Flux::Pi, PlaquetteTunnelings::uniform(t), w, 0.0), FockBasis(4, 1)));
  const double r = std::sqrt(2.0) * t;
  const std::vector<double> p{-r, -r, r, r};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(pi.values[k] - w, p[k], 1e-12);
  EXPECT_EQ(pi.degenerate_groups().size(), 2u);
  EXPECT_EQ(zero.degenerate_groups().size(), 3u);
}

TEST(Spectral, RandomHermitianResidualsAndOrthonormality) {
  std::mt19937_64 rng(7);
  for (int dim : {1, 2, 5, 17, 60, 200}) {
    const HermitianMatrix h(oracle::random_hermitian(dim, rng));
    const auto eigs = eigendecompose(h);
    const double norm = h.matrix().norm();
    for (Eigen::Index k = 0; k < eigs.dim(); ++k) {
      const double res = (h.matrix() * eigs.vectors.col(k) - eigs.values[k] * eigs.vectors.col(k)).norm();
      EXPECT_LE(res, 1e-9 * norm);
      if (k > 0) EXPECT_LE(eigs.values[k - 1], eigs.values[k]);
    }
    const auto gram = eigs.vectors.adjoint() * eigs.vectors;
    EXPECT_LE((gram - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(eigs.values.sum(), h.matrix().trace().real(), 1e-9 * std::max(1.0, eigs.values.cwiseAbs().sum()));
  }
}

TEST(Spectral, DefaultDegeneracyTolerance) {
  Eigen::VectorXd v(3);
  v << -4.0, 0.0, 2.0;
  EXPECT_DOUBLE_EQ(default_degeneracy_tol(v), 4e-8);
  EXPECT_DOUBLE_EQ(default_degeneracy_tol(Eigen::VectorXd::Zero(2)), 1e-12);
}

TEST(Spectral, SpectroscopyLines) {
  const double t = 1.5;
  const double w = 10.0;
  const auto pi = spectroscopy_lines(plaquette(Flux::Pi, PlaquetteTunnelings::uniform(t), w, 0.0), 1);
  EXPECT_NEAR(pi[3] - pi[0], 2.0 * std::sqrt(2.0) * t, 1e-12);
  EXPECT_NEAR(0.5 * (pi[3] + pi[0]), w, 1e-12);
  const auto zero = spectroscopy_lines(plaquette(Flux::Zero, PlaquetteTunnelings::uniform(t), w, 0.0), 1);
  EXPECT_NEAR(zero[0], w - 2 * t, 1e-12);
  EXPECT_NEAR(zero[1], w, 1e-12);
  EXPECT_NEAR(zero[3], w + 2 * t, 1e-12);

  std::vector<SiteParams> sites(4);
  for (auto& s : sites) s.omega = w;
  for (double line : spectroscopy_lines(LatticeSpec(sites, {}), 1)) EXPECT_DOUBLE_EQ(line, w);
  EXPECT_THROW(spectroscopy_lines(LatticeSpec(sites, {}), 0), std::invalid_argument);
}

TEST(Spectral, BlochBandsPiAreFlat) {
  const double t = 1.0;
  const auto bands = bloch_bands(std::numbers::pi, t, 201);
  EXPECT_EQ(bands.k.size(), 201u);
  EXPECT_DOUBLE_EQ(bands.k.front(), -std::numbers::pi);
  EXPECT_DOUBLE_EQ(bands.k.back(), std::numbers::pi);
  for (double w : flatness(bands)) EXPECT_LT(w, 1e-12 * t);
  EXPECT_NEAR(bands.bands[0][50], -2.0 * t, 1e-12);
  EXPECT_NEAR(bands.bands[1][50], 0.0, 1e-12);
  EXPECT_NEAR(bands.bands[2][50], 2.0 * t, 1e-12);
}

TEST(Spectral, BlochBandsZeroFluxMiddleFlatAndTouching) {
  const double t = 1.0;
  const auto bands = bloch_bands(0.0, t, 201);
  const auto w = flatness(bands);
  EXPECT_LT(w[1], 1e-12);
  EXPECT_GT(w[0], 1.0);
  EXPECT_GT(w[2], 1.0);
  for (double e : bands.bands[1]) EXPECT_NEAR(e, 0.0, 1e-12);
  // outer bands reach zero at the zone edge k = +-pi
  EXPECT_NEAR(bands.bands[0].front(), 0.0, 1e-7);
  EXPECT_NEAR(bands.bands[2].back(), 0.0, 1e-7);
  EXPECT_NEAR(bands.bands[2][100], 2.0 * std::sqrt(2.0) * t, 1e-12);
}

TEST(Spectral, BlochBandsMatchAnalyticDispersion) {
  for (double phi : {0.0, 0.7, std::numbers::pi}) {
    const auto bands = bloch_bands(phi, 1.3, 41);
    for (std::size_t i = 0; i < bands.k.size(); ++i) {
      const double k = bands.k[i];
      const double e = 1.3 * std::sqrt(4.0 + 2.0 * std::cos(k + phi) + 2.0 * std::cos(k));
      EXPECT_NEAR(bands.bands[0][i], -e, 1e-7);
      EXPECT_NEAR(bands.bands[2][i], e, 1e-7);
    }
  }
  EXPECT_THROW(bloch_bands(0.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(bloch_bands(0.0, 0.0, 5), std::invalid_argument);
}

TEST(Spectral, BandsCsv) {
  std::ostringstream os;
  write_bands_csv(os, bloch_bands(0.0, kTwoPi, 3), 1.0 / kTwoPi);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,E1,E2,E3");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Spectral, CompactLocalizedState) {
  const auto chain = rhombus_chain(3, Flux::Zero, 1.0, 0.25, 0.0);
  std::vector<std::complex<double>> psi(10, 0.0);
  psi[4] = 1.0 / std::sqrt(2.0);  // T of plaquette 1
  psi[5] = -1.0 / std::sqrt(2.0);  // B of plaquette 1
  const auto cls = verify_cls(chain, psi, 1e-12);
  EXPECT_TRUE(cls.is_eigenstate);
  EXPECT_NEAR(cls.energy, 0.25, 1e-12);
  EXPECT_EQ(cls.support_size, 2);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(10);
  for (int i = 0; i < 10; ++i) v[i] = {g(rng), g(rng)};
  v.normalize();
  std::vector<std::complex<double>> dense(v.data(), v.data() + 10);
  EXPECT_FALSE(verify_cls(chain, dense, 1e-8).is_eigenstate);

  std::vector<SiteParams> sites(3);
  for (auto& s : sites) s.omega = 0.5;
  std::vector<std::complex<double>> single{0.0, 1.0, 0.0};
  const auto lone = verify_cls(LatticeSpec(sites, {}), single, 1e-12);
  EXPECT_TRUE(lone.is_eigenstate);
  EXPECT_DOUBLE_EQ(lone.energy, 0.5);

  std::vector<std::complex<double>> unnormalized{1.0, 1.0, 0.0};
  EXPECT_THROW(verify_cls(LatticeSpec(sites, {}), unnormalized, 1e-12), std::invalid_argument);
}

TEST(Spectral, EnergyGroupsThreeParticles) {
  const double t = 1.0;
  const double U = -13.5 * t;
  const auto spec = plaquette(Flux::Pi, PlaquetteTunnelings::uniform(t), 0.0, U);
  const auto eigs = eigendecompose(build_hamiltonian(spec, FockBasis(4, 3)));
  const auto groups = eigenenergy_groups(eigs, U, 0.3);
  EXPECT_TRUE(groups.unassigned.empty());
  ASSERT_EQ(groups.groups.size(), 3u);
  EXPECT_EQ(groups.groups.at(3).size(), 4u);
  EXPECT_EQ(groups.groups.at(1).size(), 12u);
  EXPECT_EQ(groups.groups.at(0).size(), 4u);
  EXPECT_THROW(eigenenergy_groups(eigs, 0.0, 0.3), std::invalid_argument);
}

TEST(Spectral, EnergyGroupsExactWithoutTunnelingAndHardCore) {
  std::vector<SiteParams> sites(4);
  for (auto& s : sites) {
    s.U = -3.0;
    s.omega = 2.0;
  }
  const auto eigs = eigendecompose(build_hamiltonian(LatticeSpec(sites, {}), FockBasis(4, 3)));
  const auto groups = eigenenergy_groups(eigs, -3.0, 1e-12, 3 * 2.0);
  EXPECT_TRUE(groups.unassigned.empty());
  EXPECT_EQ(groups.groups.at(3).size() + groups.groups.at(1).size() + groups.groups.at(0).size(), 20u);

  const auto hc = eigendecompose(
      build_hamiltonian(plaquette(Flux::Pi, PlaquetteTunnelings::uniform(1.0), 0.0, -13.5), FockBasis(4, 2, 1)));
  const auto g = eigenenergy_groups(hc, -13.5, 0.3);
  ASSERT_EQ(g.groups.size(), 1u);
  EXPECT_EQ(g.groups.begin()->first, 0);
}
