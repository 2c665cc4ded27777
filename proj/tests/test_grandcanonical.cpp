#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "sitedft/canonical.hpp"
#include "sitedft/errors.hpp"
#include "sitedft/grandcanonical.hpp"
#include "sitedft/rng.hpp"
#include "test_helpers.hpp"

namespace {

using namespace sitedft;
using namespace sitedft::testing;

constexpr double kHalfFillingEnsembleValue = 1.9389239907725524;
constexpr double kHalfFillingFixedCountValue = 1.9578723560298334;
constexpr double kHalfFillingGap = 0.018948365257281052;
constexpr double kEnvelopeAtThree = -3.631876009227448;
constexpr double kEqualizedGroundEnergy = -3.6319142857142856;

const std::vector<SitePermutation> kDiamondReflections = {
    {1, 0, 3, 2, 4, 5}, {0, 1, 2, 3, 5, 4}};

SiteConfiguration random_four_sites(Rng& rng) {
  for (;;) {
    SiteConfiguration config;
    config.exponent_s = 1.0;
    for (int j = 0; j < 4; ++j) {
      config.points.push_back(
          {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
           rng.uniform(-2.0, 2.0)});
    }
    double closest = 1e30;
    for (int j = 0; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        double squared = 0.0;
        for (int axis = 0; axis < 3; ++axis) {
          const double diff = config.points[j][axis] - config.points[k][axis];
          squared += diff * diff;
        }
        closest = std::min(closest, std::sqrt(squared));
      }
    }
    if (closest > 1e-3) return config;
  }
}

// A density guaranteed attainable at fixed cardinality: the marginal of
// a random mixture of equal-size subsets.
DensityVector random_integer_mass_density(Rng& rng, int sites,
                                          int cardinality) {
  const std::vector<Occupation> subsets =
      enumerate_occupations(sites, cardinality);
  EnsembleState ensemble;
  double total = 0.0;
  for (int pick = 0; pick < 3; ++pick) {
    const Occupation& occ = subsets[rng.below(subsets.size())];
    const double weight = rng.uniform(0.1, 1.0);
    ensemble.probs[occ.mask] += weight;
    total += weight;
  }
  for (auto& [mask, p] : ensemble.probs) p /= total;
  return ensemble_density(ensemble, sites);
}

void check_certificate(const SiteConfiguration& config,
                       const DensityVector& rho, double functional,
                       const DualCertificate& certificate) {
  const int sites = config.site_count();
  double coupling = 0.0;
  for (int k = 0; k < sites; ++k) {
    coupling += certificate.potential[k] * rho[k];
  }
  CHECK(certificate.gap_check <= 1e-7);
  CHECK(std::abs(functional -
                 (certificate.gc_ground_energy - coupling)) <= 1e-7);
  const std::vector<double> interaction = all_subset_energies(config);
  for (const Occupation& occ : enumerate_occupations(sites)) {
    const double total =
        interaction[occ.mask] + potential_sum(certificate.potential, occ);
    CHECK(total >= certificate.gc_ground_energy - 1e-8);
  }
  CHECK_FALSE(certificate.active_subsets.empty());
  CHECK(certificate.gc_ground_energy <= 1e-9);
}

}  // namespace

TEST_SUITE("grandcanonical") {

TEST_CASE("half filling over all cardinalities beats the fixed count") {
  const SiteConfiguration config = six_site_diamond();
  const FunctionalValue result = gc_functional(config, half_filling(6));
  CHECK(result.value ==
        doctest::Approx(kHalfFillingEnsembleValue).epsilon(1e-9));

  const DensityVector density = ensemble_density(result.ensemble, 6);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(density[k] - 0.5) <= 1e-8);

  // Half the mass on the inner pair, half on the other four sites.
  REQUIRE(result.ensemble.probs.size() == 2);
  REQUIRE(result.ensemble.probs.count(3) == 1);
  REQUIRE(result.ensemble.probs.count(60) == 1);
  CHECK(result.ensemble.probs.at(3) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(result.ensemble.probs.at(60) == doctest::Approx(0.5).epsilon(1e-9));

  const FunctionalValue fixed =
      canonical_functional(config, half_filling(6), 3);
  CHECK(result.value <= fixed.value + 1e-8);
  CHECK(fixed.value - result.value ==
        doctest::Approx(kHalfFillingGap).epsilon(1e-9));
}

TEST_CASE("zero density gives the empty ensemble at zero cost") {
  const SiteConfiguration config = six_site_diamond();
  const FunctionalValue result = gc_functional(config, DensityVector(6, 0.0));
  CHECK(result.value == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(result.ensemble.probs.size() == 1);
  CHECK(result.ensemble.probs.count(0) == 1);
}

TEST_CASE("out-of-range densities are rejected") {
  const SiteConfiguration config = six_site_diamond();
  DensityVector rho = half_filling(6);
  rho[1] = 1.5;
  CHECK_THROWS_AS(gc_functional(config, rho), InfeasibleDensity);
  rho[1] = -0.2;
  CHECK_THROWS_AS(gc_functional(config, rho), InfeasibleDensity);
  CHECK_THROWS_AS(gc_functional(config, DensityVector(4, 0.5)),
                  InvalidConfiguration);
}

TEST_CASE("mean-count energies reproduce the envelope at integers") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0x6cfe1a01u);
  std::vector<ExternalPotential> potentials = {counterexample_potential(),
                                               equalizing_potential()};
  for (int trial = 0; trial < 5; ++trial) {
    ExternalPotential v(6);
    for (double& entry : v) entry = rng.uniform(-3.0, 0.0);
    potentials.push_back(v);
  }
  for (const ExternalPotential& v : potentials) {
    const EnergyProfile profile = energy_profile(config, v);
    for (int n = 0; n <= 6; ++n) {
      CHECK(std::abs(gc_energy(config, v, n) - profile.envelope[n]) <= 1e-8);
    }
  }
}

TEST_CASE("frozen mean-count values at three electrons") {
  const SiteConfiguration config = six_site_diamond();
  CHECK(gc_energy(config, counterexample_potential(), 3.0) ==
        doctest::Approx(kEnvelopeAtThree).epsilon(1e-9));
  CHECK(std::abs(gc_energy(config, equalizing_potential(), 3.0) -
                 kEqualizedGroundEnergy) <= 1e-8);
  CHECK(gc_energy(config, counterexample_potential(), 0.0) == 0.0);
}

TEST_CASE("mean-count energy interpolates linearly between integers") {
  const SiteConfiguration config = six_site_diamond();
  const ExternalPotential v = counterexample_potential();
  const EnergyProfile profile = energy_profile(config, v);
  for (int tick = 0; tick <= 60; ++tick) {
    const double mean = tick / 10.0;
    const int below = std::min(5, static_cast<int>(mean));
    const double t = mean - below;
    const double expected = (1.0 - t) * profile.envelope[below] +
                            t * profile.envelope[below + 1];
    CHECK(std::abs(gc_energy(config, v, mean) - expected) <= 1e-8);
  }
}

TEST_CASE("mean counts outside the site range are rejected") {
  const SiteConfiguration config = six_site_diamond();
  const ExternalPotential v = counterexample_potential();
  CHECK_THROWS_AS(gc_energy(config, v, -0.1), MassOutOfRange);
  CHECK_THROWS_AS(gc_energy(config, v, 6.5), MassOutOfRange);
  CHECK_THROWS_AS(gc_energy(config, ExternalPotential(5, -1.0), 3.0),
                  InvalidConfiguration);
}

TEST_CASE("raw duals certify the half-filling value") {
  const SiteConfiguration config = six_site_diamond();
  const DensityVector rho = half_filling(6);
  const FunctionalValue functional = gc_functional(config, rho);
  const DualCertificate certificate = dual_potential(config, rho);
  check_certificate(config, rho, functional.value, certificate);
}

TEST_CASE("symmetrized duals stay optimal and become reflection even") {
  const SiteConfiguration config = six_site_diamond();
  const DensityVector rho = half_filling(6);
  const FunctionalValue functional = gc_functional(config, rho);
  const DualCertificate raw = dual_potential(config, rho);
  const DualCertificate certificate =
      dual_potential(config, rho, kDiamondReflections);
  check_certificate(config, rho, functional.value, certificate);
  CHECK(certificate.gc_ground_energy ==
        doctest::Approx(raw.gc_ground_energy).epsilon(1e-9));
  CHECK(certificate.potential[0] ==
        doctest::Approx(certificate.potential[1]).epsilon(1e-9));
  CHECK(certificate.potential[2] ==
        doctest::Approx(certificate.potential[3]).epsilon(1e-9));
  CHECK(certificate.potential[4] ==
        doctest::Approx(certificate.potential[5]).epsilon(1e-9));
}

TEST_CASE("pinning the vertical pair selects the equalizing potential") {
  const SiteConfiguration config = six_site_diamond();
  const DensityVector rho = half_filling(6);
  const FunctionalValue functional = gc_functional(config, rho);
  const DualCertificate certificate = dual_potential(
      config, rho, kDiamondReflections, {{4, -2.0}, {5, -2.0}});
  check_certificate(config, rho, functional.value, certificate);

  const ExternalPotential published = equalizing_potential();
  for (int k = 0; k < 6; ++k) {
    CHECK(std::abs(certificate.potential[k] - published[k]) <= 2e-4);
  }
  CHECK(certificate.potential[0] ==
        doctest::Approx(-2.173080024922549).epsilon(1e-9));
  CHECK(certificate.potential[2] ==
        doctest::Approx(-1.3977183014093846).epsilon(1e-9));
  CHECK(certificate.potential[4] == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(certificate.potential[5] == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(certificate.gc_ground_energy ==
        doctest::Approx(-3.6318743355593783).epsilon(1e-9));

  // The tight subsets are the two-, three-, and four-electron ground
  // configurations that the selected potential makes degenerate.
  std::vector<std::uint32_t> active;
  for (const Occupation& occ : certificate.active_subsets) {
    active.push_back(occ.mask);
  }
  CHECK(active == std::vector<std::uint32_t>{3, 19, 35, 60});
  CHECK(certificate.face_dimension == 3);

  // The selected potential levels the ground-state energies around the
  // half-filling count.
  const double e2 = canonical_energy(config, certificate.potential, 2).value;
  const double e3 = canonical_energy(config, certificate.potential, 3).value;
  const double e4 = canonical_energy(config, certificate.potential, 4).value;
  CHECK(std::abs(e2 - e3) <= 1e-3);
  CHECK(std::abs(e3 - e4) <= 1e-3);
  CHECK(std::abs(e2 - e4) <= 1e-3);
}

TEST_CASE("two fully occupied sites satisfy the duality identity") {
  SiteConfiguration config;
  config.points = {{0.0, 0.0, 0.0}, {1.5, 0.0, 0.0}};
  config.exponent_s = 1.0;
  const DensityVector rho = {1.0, 1.0};
  const FunctionalValue functional = gc_functional(config, rho);
  CHECK(functional.value == doctest::Approx(1.0 / 1.5).epsilon(1e-9));
  const DualCertificate certificate = dual_potential(config, rho);
  check_certificate(config, rho, functional.value, certificate);
  CHECK(std::abs((certificate.potential[0] + certificate.potential[1]) -
                 (certificate.gc_ground_energy - 1.0 / 1.5)) <= 1e-8);
}

TEST_CASE("the empty density certifies with a zero ground energy") {
  const SiteConfiguration config = six_site_diamond();
  const DensityVector rho(6, 0.0);
  const DualCertificate certificate = dual_potential(config, rho);
  check_certificate(config, rho, 0.0, certificate);
  CHECK(std::abs(certificate.gc_ground_energy) <= 1e-9);
}

TEST_CASE("invalid symmetries and pins are rejected") {
  const SiteConfiguration config = six_site_diamond();
  const DensityVector rho = half_filling(6);
  CHECK_THROWS_AS(dual_potential(config, rho, {{0, 0, 2, 3, 4, 5}}),
                  InvalidConfiguration);
  CHECK_THROWS_AS(dual_potential(config, rho, {{1, 0, 3, 2, 4}}),
                  InvalidConfiguration);
  CHECK_THROWS_AS(dual_potential(config, rho, {{2, 1, 0, 3, 4, 5}}),
                  InvalidConfiguration);

  DensityVector uneven = rho;
  uneven[0] = 0.9;
  uneven[1] = 0.1;
  CHECK_THROWS_AS(dual_potential(config, uneven, kDiamondReflections),
                  InvalidConfiguration);

  CHECK_THROWS_AS(dual_potential(config, rho, {}, {{7, -2.0}}),
                  InvalidConfiguration);
  CHECK_THROWS_AS(dual_potential(config, rho, {}, {{4, 5.0}}),
                  InvalidConfiguration);
}

TEST_CASE("the ensemble functional never exceeds the fixed-count one") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0x6c1e5501u);
  for (int trial = 0; trial < 20; ++trial) {
    const int cardinality = 1 + static_cast<int>(rng.below(5));
    const DensityVector rho =
        random_integer_mass_density(rng, 6, cardinality);
    const FunctionalValue fixed =
        canonical_functional(config, rho, cardinality);
    const FunctionalValue free = gc_functional(config, rho);
    CHECK(free.value <= fixed.value + 1e-8);
  }
}

TEST_CASE("four-site geometries show no functional gap") {
  Rng rng(0x4511e001u);
  for (int trial = 0; trial < 20; ++trial) {
    const SiteConfiguration config = random_four_sites(rng);
    const int cardinality = 1 + static_cast<int>(rng.below(3));
    const DensityVector rho =
        random_integer_mass_density(rng, 4, cardinality);
    const FunctionalValue fixed =
        canonical_functional(config, rho, cardinality);
    const FunctionalValue free = gc_functional(config, rho);
    CHECK(std::abs(fixed.value - free.value) <= 1e-8);
  }
}

TEST_CASE("swapping in a doubly occupied pair shifts by the pair energy") {
  Rng rng(0xe8c4a001u);
  for (int trial = 0; trial < 20; ++trial) {
    const SiteConfiguration config = random_four_sites(rng);
    const std::vector<double> interaction = all_subset_energies(config);
    const double lhs = interaction[0b0111] + interaction[0b1011] -
                       interaction[0b0011] - interaction[0b1111];
    double squared = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const double diff = config.points[2][axis] - config.points[3][axis];
      squared += diff * diff;
    }
    const double rhs = -1.0 / std::sqrt(squared);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

}  // TEST_SUITE
