#include <gtest/gtest.h>

#include <algorithm>

#include "abcage/caging.hpp"
#include "abcage/dynamics.hpp"
#include "abcage/units.hpp"

using namespace abcage;

namespace {

LatticeSpec pi_plaquette(double U, double t = 1.0) {
  return plaquette(Flux::Pi, PlaquetteTunnelings::uniform(t), 0.0, U);
}

CagingClass classify(const LatticeSpec& spec, int n, const Partition& p) {
  return classify_partition(spec, n, p, CagingMode::HardcoreLimit).classification;
}

}  // namespace

TEST(Caging, SingleParticleCannotReachOppositeCorner) {
  const auto spec = pi_plaquette(0.0);
  const FockBasis basis(4, 1);
  const auto r = unreachable_states(eigendecompose(build_hamiltonian(spec, basis)), 0);
  EXPECT_EQ(r.unreachable, (std::vector<std::size_t>{3}));
  EXPECT_EQ(r.group_energies.size(), 2u);
  EXPECT_NEAR(r.max_amplitude[0], 0.5, 1e-12);
  EXPECT_LT(r.max_amplitude[3], 1e-12);

  const auto zero = plaquette(Flux::Zero, PlaquetteTunnelings::uniform(1.0), 0.0, 0.0);
  EXPECT_TRUE(unreachable_states(eigendecompose(build_hamiltonian(zero, basis)), 0).unreachable.empty());
  EXPECT_THROW(unreachable_states(eigendecompose(build_hamiltonian(zero, basis)), 4), std::out_of_range);
}

TEST(Caging, HardCorePairCannotReachTopBottom) {
  const auto spec = pi_plaquette(0.0);
  const FockBasis basis(4, 2, 1);
  const auto r = unreachable_states(eigendecompose(build_hamiltonian(spec, basis)), state_index(basis, {1, 0, 0, 1}));
  EXPECT_EQ(r.unreachable, (std::vector<std::size_t>{state_index(basis, {0, 1, 1, 0})}));
}

TEST(Caging, FrozenSites) {
  const auto spec = pi_plaquette(-13.5);
  const FockBasis basis(4, 4);
  const auto eigs = eigendecompose(build_hamiltonian(spec, basis));
  const auto grid = time_grid(50.0, 801);
  const auto mott = state_index(basis, {1, 1, 1, 1});
  // compare against sites that stay put in the direct walk
  const auto walk = unitary_walk(spec, basis, QuantumState::basis_state(static_cast<Eigen::Index>(basis.size()),
                                                                        static_cast<Eigen::Index>(mott)),
                                 grid, {true, false, false, false});
  std::vector<int> still_sites;
  for (int s = 0; s < 4; ++s) {
    const auto& n = walk.get("n_" + spec.labels()[s]);
    const bool still = std::all_of(n.begin(), n.end(), [](double x) { return std::abs(x - 1.0) < 1e-9; });
    if (still) still_sites.push_back(s);
  }
  EXPECT_EQ(frozen_sites(eigs, basis.states(), mott, grid), still_sites);

  const FockBasis one(4, 1);
  const auto single = eigendecompose(build_hamiltonian(spec, one));
  EXPECT_EQ(frozen_sites(single, one.states(), 0, time_grid(20.0, 801)), (std::vector<int>{3}));
  EXPECT_THROW(frozen_sites(single, one.states(), 0, time_grid(20.0, 100)), std::invalid_argument);
}

TEST(Caging, DoublonIsNotFrozen) {
  const auto spec = pi_plaquette(-13.5);
  const FockBasis basis(4, 2);
  const auto eigs = eigendecompose(build_hamiltonian(spec, basis));
  const auto frozen = frozen_sites(eigs, basis.states(), state_index(basis, {2, 0, 0, 0}), time_grid(100.0, 2001));
  EXPECT_TRUE(std::find(frozen.begin(), frozen.end(), 0) == frozen.end());
}

TEST(Caging, ModeStrings) {
  EXPECT_EQ(to_string(CagingClass::RealSpace), "real_space");
  EXPECT_EQ(to_string(CagingClass::FockSpace), "fock_space");
  EXPECT_EQ(to_string(CagingClass::NotCaged), "not_caged");
  EXPECT_EQ(parse_caging_mode("finite_U"), CagingMode::FiniteU);
  EXPECT_EQ(to_string(parse_caging_mode("hardcore_limit")), "hardcore_limit");
  EXPECT_THROW(parse_caging_mode("hardcore"), std::invalid_argument);
}

TEST(Caging, ClassificationUpToFiveParticles) {
  const auto spec = pi_plaquette(-mhz_to_angular(157.95), mhz_to_angular(11.7));
  EXPECT_EQ(classify(spec, 1, {1}), CagingClass::RealSpace);
  EXPECT_EQ(classify(spec, 2, {2}), CagingClass::NotCaged);
  EXPECT_EQ(classify(spec, 2, {1, 1}), CagingClass::FockSpace);
  EXPECT_EQ(classify(spec, 3, {3}), CagingClass::RealSpace);
  EXPECT_EQ(classify(spec, 3, {2, 1}), CagingClass::FockSpace);
  EXPECT_EQ(classify(spec, 3, {1, 1, 1}), CagingClass::RealSpace);
  for (const auto& r : classify_all(spec, 4, CagingMode::HardcoreLimit)) {
    const bool mott = r.partition == Partition{1, 1, 1, 1};
    EXPECT_EQ(r.classification, mott ? CagingClass::RealSpace : CagingClass::NotCaged) << format_partition(r.partition);
  }
  EXPECT_EQ(classify(spec, 5, {5}), CagingClass::RealSpace);
  EXPECT_EQ(classify(spec, 5, {4, 1}), CagingClass::FockSpace);
  EXPECT_EQ(classify(spec, 5, {2, 1, 1, 1}), CagingClass::RealSpace);
}

TEST(Caging, ReportJsonAndWitnesses) {
  const auto spec = pi_plaquette(-13.5);
  const auto report = classify_partition(spec, 2, {1, 1}, CagingMode::HardcoreLimit);
  // LR and TB cage each other; the mixed pairs reach everything
  EXPECT_EQ(report.witnesses.size(), 2u);
  const auto json = report.to_json(spec);
  EXPECT_NE(json.find("\"classification\":\"fock_space\""), std::string::npos);
  EXPECT_NE(json.find("\"mode\":\"hardcore_limit\""), std::string::npos);
  EXPECT_THROW(classify_partition(spec, 2, {3}, CagingMode::HardcoreLimit), std::invalid_argument);
}

TEST(Caging, EffectiveHamiltonianOfSingleStatePartitionIsZero) {
  const auto spec = pi_plaquette(-13.5);
  const FockBasis basis(4, 4);
  const auto eigs = eigendecompose(build_hamiltonian(spec, basis));
  const auto idx = subspace_indices(basis, {1, 1, 1, 1});
  const auto h = partition_effective_hamiltonian(eigs, idx);
  EXPECT_EQ(h.dim(), 1);
  EXPECT_EQ(h(0, 0), std::complex<double>(0.0, 0.0));
  const std::vector<std::size_t> empty;
  EXPECT_THROW(partition_effective_hamiltonian(eigs, empty), std::invalid_argument);
}

TEST(Caging, EffectiveHamiltonianIsHermitianAndReducesToHopping) {
  // deep in the hard-core limit the [1,1] block tends to the bare hard-core Hamiltonian
  const auto spec = pi_plaquette(-1e4);
  const FockBasis basis(4, 2);
  const auto eigs = eigendecompose(build_hamiltonian(spec, basis));
  const auto idx = subspace_indices(basis, {1, 1});
  const auto h = partition_effective_hamiltonian(eigs, idx);
  const auto bare = project_subspace(build_hamiltonian(spec, basis), idx);
  EXPECT_LE((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((h.matrix() - bare.matrix()).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(Caging, PartnersAreRotationImages) {
  const auto spec = pi_plaquette(-13.5);
  EXPECT_EQ(rotate_180({2, 1, 0, 0}), (FockState{0, 0, 1, 2}));
  EXPECT_THROW(rotate_180({1, 0, 0}), std::invalid_argument);
  const auto lr = caged_partner(spec, {1, 0, 0, 1});
  ASSERT_TRUE(lr.partner.has_value());
  EXPECT_EQ(*lr.partner, (FockState{0, 1, 1, 0}));
  // LR is its own rotation image, so its partner is not
  EXPECT_FALSE(lr.is_rotation_image);
  const FockBasis three(4, 3);
  for (std::size_t i : subspace_indices(three, {2, 1})) {
    const auto r = caged_partner(spec, three[i]);
    ASSERT_TRUE(r.partner.has_value()) << format_state(three[i]);
    EXPECT_TRUE(r.is_rotation_image) << format_state(three[i]);
  }
}

TEST(Caging, GaugeInvariance) {
  const auto spec = plaquette(Flux::Pi, {1.0, 1.1, 0.95, 1.05}, 0.0, -13.5);
  for (int s = 0; s < 4; ++s) {
    const auto g = gauge_transform(spec, s);
    for (int n = 1; n <= 3; ++n) {
      const auto a = classify_all(spec, n, CagingMode::HardcoreLimit);
      const auto b = classify_all(g, n, CagingMode::HardcoreLimit);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].classification, b[k].classification);
    }
  }
}

TEST(Caging, FiniteUPairStaysCaged) {
  for (double ratio : {1.0, 13.5, 100.0}) {
    const auto spec = pi_plaquette(-ratio);
    const FockBasis basis(4, 2);
    const auto eigs = eigendecompose(build_hamiltonian(spec, basis));
    const auto r = unreachable_states(eigs, state_index(basis, {1, 0, 0, 1}));
    const auto tb = state_index(basis, {0, 1, 1, 0});
    EXPECT_TRUE(std::find(r.unreachable.begin(), r.unreachable.end(), tb) != r.unreachable.end()) << ratio;
    const auto walk = unitary_walk(
        spec, basis,
        QuantumState::basis_state(10, static_cast<Eigen::Index>(state_index(basis, {1, 0, 0, 1}))),
        time_grid(40.0 * swap_time(spec), 801), {false, false, false, true});
    for (double p : walk.get("PP_T_B")) EXPECT_LT(p, 1e-10);
    EXPECT_EQ(classify_partition(spec, 2, {1, 1}, CagingMode::FiniteU).classification, CagingClass::FockSpace);
  }
}

TEST(Caging, ZeroFluxControl) {
  const auto spec = plaquette(Flux::Zero, PlaquetteTunnelings::uniform(1.0), 0.0, -13.5);
  for (int n = 1; n <= 3; ++n) {
    for (const auto& r : classify_all(spec, n, CagingMode::HardcoreLimit)) {
      EXPECT_EQ(r.classification, CagingClass::NotCaged) << n << " " << format_partition(r.partition);
    }
  }
}

TEST(Caging, TriplePlaquetteSingleParticle) {
  const auto chain = rhombus_chain(3, Flux::Pi, 1.0, 0.0, 0.0);
  const FockBasis basis(10, 1);
  const auto eigs = eigendecompose(build_hamiltonian(chain, basis));
  // from hub S1 only the T/B sites of the two adjacent plaquettes are reached
  const auto r = unreachable_states(eigs, 3);
  EXPECT_EQ(r.unreachable, (std::vector<std::size_t>{0, 6, 7, 8, 9}));
  const FockBasis pair(10, 2, 1);
  const auto hub = unreachable_states(eigendecompose(build_hamiltonian(chain, pair)),
                                      state_index(pair, {0, 0, 0, 1, 0, 0, 1, 0, 0, 0}));
  EXPECT_TRUE(std::find(hub.unreachable.begin(), hub.unreachable.end(),
                        state_index(pair, {0, 0, 0, 0, 1, 1, 0, 0, 0, 0})) != hub.unreachable.end());
}

TEST(Caging, UnreachableMatchesDynamics) {
  const auto spec = pi_plaquette(-5.0);
  const FockBasis basis(4, 3);
  const auto eigs = eigendecompose(build_hamiltonian(spec, basis));
  const auto times = time_grid(60.0, 1501);
  for (std::size_t init = 0; init < basis.size(); init += 3) {
    const auto r = unreachable_states(eigs, init);
    const auto states = evolve_state(eigs, QuantumState::basis_state(static_cast<Eigen::Index>(basis.size()),
                                                                    static_cast<Eigen::Index>(init)),
                                     times);
    for (std::size_t j : r.unreachable) {
      for (const auto& psi : states) EXPECT_LT(std::norm(psi[static_cast<Eigen::Index>(j)]), 1e-12);
    }
  }
}

TEST(Caging, EvenParticleConjecture) {
  const auto spec = pi_plaquette(-mhz_to_angular(157.95), mhz_to_angular(11.7));
  const auto check = even_n_conjecture(spec, 6);
  EXPECT_EQ(check.partition, (Partition{2, 2, 1, 1}));
  EXPECT_TRUE(check.holds);
  EXPECT_EQ(check.observed, CagingClass::FockSpace);
  EXPECT_THROW(even_n_conjecture(spec, 5), std::invalid_argument);
}
