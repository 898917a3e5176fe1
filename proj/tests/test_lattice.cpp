#include <gtest/gtest.h>

#include <cmath>

#include "abcage/hamiltonian.hpp"
#include "abcage/lattice.hpp"
#include "abcage/spectral.hpp"
#include "abcage/units.hpp"

using namespace abcage;

namespace {

PlaquetteTunnelings pi_device() {
  return {mhz_to_angular(11.781), mhz_to_angular(11.884), mhz_to_angular(11.736), mhz_to_angular(11.238)};
}

}  // namespace

TEST(Lattice, PiDeviceHasNegativeRightTopBond) {
  const auto spec = plaquette(Flux::Pi, pi_device(), 0.0, 0.0);
  ASSERT_EQ(spec.n_sites(), 4);
  EXPECT_EQ(spec.labels(), (std::vector<std::string>{"L", "T", "B", "R"}));
  const auto* rt = spec.find_bond(3, 1);
  ASSERT_NE(rt, nullptr);
  EXPECT_NEAR(rt->t, -mhz_to_angular(11.736), 1e-12);
  int negative = 0;
  for (const auto& b : spec.bonds()) negative += b.t < 0.0;
  EXPECT_EQ(negative, 1);
  EXPECT_NEAR(spec.find_bond(0, 1)->t, mhz_to_angular(11.781), 1e-12);
  EXPECT_NEAR(spec.find_bond(0, 2)->t, mhz_to_angular(11.884), 1e-12);
  EXPECT_NEAR(spec.find_bond(3, 2)->t, mhz_to_angular(11.238), 1e-12);
}

TEST(Lattice, ZeroDeviceAllPositive) {
  const PlaquetteTunnelings t{mhz_to_angular(11.879), mhz_to_angular(11.792), mhz_to_angular(11.587),
                              mhz_to_angular(11.734)};
  const auto spec = plaquette(Flux::Zero, t, 0.0, 0.0);
  for (const auto& b : spec.bonds()) EXPECT_GT(b.t, 0.0);
  EXPECT_NEAR(angular_to_mhz(spec.mean_abs_tunneling()), (11.879 + 11.792 + 11.587 + 11.734) / 4.0, 1e-12);
}

TEST(Lattice, LoopFlux) {
  const auto pi = plaquette(Flux::Pi, PlaquetteTunnelings::uniform(1.0), 0.0, 0.0);
  const auto zero = plaquette(Flux::Zero, PlaquetteTunnelings::uniform(1.0), 0.0, 0.0);
  const std::vector<int> cycle{0, 1, 3, 2};  // L, T, R, B
  EXPECT_EQ(loop_flux(pi, cycle), Flux::Pi);
  EXPECT_EQ(loop_flux(zero, cycle), Flux::Zero);
  const std::vector<int> broken{0, 3, 1};
  EXPECT_THROW(loop_flux(pi, broken), std::invalid_argument);
}

TEST(Lattice, ZeroTunnelingRejected) {
  EXPECT_THROW(plaquette(Flux::Pi, {1.0, 0.0, 1.0, 1.0}, 0.0, 0.0), std::invalid_argument);
}

TEST(Lattice, SpecValidation) {
  EXPECT_THROW(LatticeSpec({SiteParams{}, SiteParams{}}, {{0, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(LatticeSpec({SiteParams{}, SiteParams{}}, {{0, 2, 1.0}}), std::invalid_argument);
  EXPECT_THROW(LatticeSpec({SiteParams{}, SiteParams{}}, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
  SiteParams bad;
  bad.t1_01 = -1.0;
  EXPECT_THROW(LatticeSpec({bad}, {}), std::invalid_argument);
  EXPECT_THROW(LatticeSpec({SiteParams{}}, {}, {"a", "b"}), std::invalid_argument);
}

TEST(Lattice, GaugeTransformIsInvolutionAndKeepsFlux) {
  const auto pi = plaquette(Flux::Pi, pi_device(), 0.3, -2.0);
  const std::vector<int> cycle{0, 1, 3, 2};
  for (int s = 0; s < 4; ++s) {
    const auto g = gauge_transform(pi, s);
    EXPECT_EQ(loop_flux(g, cycle), Flux::Pi);
    EXPECT_TRUE(gauge_transform(g, s) == pi);
  }
}

TEST(Lattice, GaugeAtRightMovesNegativeBondToRightBottom) {
  const auto g = gauge_transform(plaquette(Flux::Pi, PlaquetteTunnelings::uniform(1.0), 0.0, 0.0), 3);
  EXPECT_GT(g.find_bond(3, 1)->t, 0.0);
  EXPECT_LT(g.find_bond(3, 2)->t, 0.0);
  EXPECT_GT(g.find_bond(0, 1)->t, 0.0);
  EXPECT_GT(g.find_bond(0, 2)->t, 0.0);
}

TEST(Lattice, GaugeTransformKeepsSpectrum) {
  const auto pi = plaquette(Flux::Pi, pi_device(), 1.0, -mhz_to_angular(157.0));
  for (int n = 1; n <= 3; ++n) {
    const FockBasis basis(4, n);
    const auto e0 = eigendecompose(build_hamiltonian(pi, basis)).values;
    for (int s = 0; s < 4; ++s) {
      const auto e1 = eigendecompose(build_hamiltonian(gauge_transform(pi, s), basis)).values;
      EXPECT_LE((e0 - e1).cwiseAbs().maxCoeff(), 1e-10 * e0.cwiseAbs().maxCoeff());
    }
  }
}

TEST(Lattice, RhombusChainCounts) {
  const auto chain = rhombus_chain(3, Flux::Pi, 1.0, 0.0, 0.0);
  EXPECT_EQ(chain.n_sites(), 10);
  EXPECT_EQ(chain.bonds().size(), 12u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(loop_flux(chain, rhombus_cycle(k)), Flux::Pi);
  const auto zero = rhombus_chain(3, Flux::Zero, 1.0, 0.0, 0.0);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(loop_flux(zero, rhombus_cycle(k)), Flux::Zero);
}

TEST(Lattice, SinglePlaquetteChainMatchesPlaquette) {
  for (Flux f : {Flux::Zero, Flux::Pi}) {
    const auto chain = rhombus_chain(1, f, 2.0, 0.5, -3.0);
    const auto plaq = plaquette(f, PlaquetteTunnelings::uniform(2.0), 0.5, -3.0);
    EXPECT_EQ(chain.sites(), plaq.sites());
    ASSERT_EQ(chain.bonds().size(), plaq.bonds().size());
    for (const auto& b : plaq.bonds()) {
      const auto* c = chain.find_bond(b.i, b.j);
      ASSERT_NE(c, nullptr);
      EXPECT_EQ(c->t, b.t);
    }
  }
}

TEST(Lattice, DetuningAndLookup) {
  const auto spec = plaquette(Flux::Pi, PlaquetteTunnelings::uniform(1.0), 2.0, 0.0);
  const auto r = *spec.site_index("R");
  const auto shifted = spec.with_detuning(r, mhz_to_angular(0.2));
  EXPECT_NEAR(shifted.site(r).omega - spec.site(r).omega, kTwoPi * 0.2, 1e-12);
  EXPECT_EQ(shifted.site(0).omega, spec.site(0).omega);
  EXPECT_FALSE(spec.site_index("X").has_value());
  EXPECT_EQ(spec.find_bond(1, 2), nullptr);
}
