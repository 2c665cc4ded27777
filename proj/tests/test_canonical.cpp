#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "sitedft/canonical.hpp"
#include "sitedft/errors.hpp"
#include "sitedft/rng.hpp"
#include "test_helpers.hpp"

namespace {

using namespace sitedft;
using namespace sitedft::testing;

std::vector<std::uint32_t> masks_of(const std::vector<Occupation>& occs) {
  std::vector<std::uint32_t> masks;
  for (const Occupation& occ : occs) masks.push_back(occ.mask);
  return masks;
}

ExternalPotential random_potential(Rng& rng, int sites) {
  ExternalPotential v(sites);
  for (double& entry : v) entry = rng.uniform(-3.0, 0.0);
  return v;
}

// Fixed-count ground-state energies of the six-site fixture in the
// potential that breaks midpoint convexity at three electrons.
constexpr double kEnergyByCount[7] = {
    0.0,
    -2.1665,
    -3.6187142857142858,
    -3.612947619047619,
    -3.64503773274061,
    -2.394871066073942,
    -0.4304186851215608,
};

constexpr double kEnvelopeAtThree = -3.631876009227448;
constexpr double kHalfFillingFunctional = 1.9578723560298334;
constexpr double kTripleEnergy123 = 2.130952380952381;

}  // namespace

TEST_SUITE("canonical") {

TEST_CASE("ground-state energies and minimizers of the six-site fixture") {
  const SiteConfiguration config = six_site_diamond();
  const ExternalPotential v = counterexample_potential();

  const std::vector<std::vector<std::uint32_t>> expected_masks = {
      {0}, {1, 2}, {3}, {7, 11}, {60}, {61, 62}, {63}};
  for (int n = 0; n <= 6; ++n) {
    CAPTURE(n);
    const CanonicalEnergy energy = canonical_energy(config, v, n);
    CHECK(energy.finite);
    CHECK(energy.value ==
          doctest::Approx(kEnergyByCount[n]).epsilon(1e-12));
    CHECK(masks_of(energy.minimizers) == expected_masks[n]);
  }
}

TEST_CASE("zero electrons cost nothing and too many cost infinitely much") {
  const SiteConfiguration config = six_site_diamond();
  const ExternalPotential v = counterexample_potential();

  const CanonicalEnergy none = canonical_energy(config, v, 0);
  CHECK(none.finite);
  CHECK(none.value == 0.0);
  REQUIRE(none.minimizers.size() == 1);
  CHECK(none.minimizers[0].mask == 0);

  const CanonicalEnergy overfull = canonical_energy(config, v, 7);
  CHECK_FALSE(overfull.finite);
  CHECK(overfull.minimizers.empty());

  CHECK_THROWS_AS(canonical_energy(config, v, -1), CardinalityOutOfRange);
  CHECK_THROWS_AS(canonical_energy(config, ExternalPotential(5, 0.0), 2),
                  InvalidConfiguration);
}

TEST_CASE("uniform potential shifts move every energy by count times shift") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0x51a7e001u);
  for (int trial = 0; trial < 20; ++trial) {
    const ExternalPotential v = random_potential(rng, 6);
    const double shift = rng.uniform(-2.0, 2.0);
    ExternalPotential shifted = v;
    for (double& entry : shifted) entry += shift;
    for (int n = 0; n <= 6; ++n) {
      const CanonicalEnergy base = canonical_energy(config, v, n);
      const CanonicalEnergy moved = canonical_energy(config, shifted, n);
      CHECK(moved.value ==
            doctest::Approx(base.value + n * shift).epsilon(1e-12));
      CHECK(masks_of(moved.minimizers) == masks_of(base.minimizers));
    }
  }
}

TEST_CASE("one electron settles on the most attractive site") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0x00e1ec01u);
  for (int trial = 0; trial < 20; ++trial) {
    const ExternalPotential v = random_potential(rng, 6);
    double least = v[0];
    for (double entry : v) least = std::min(least, entry);
    const CanonicalEnergy energy = canonical_energy(config, v, 1);
    CHECK(energy.value == least);
  }
}

TEST_CASE("half filling at three electrons costs the frozen optimum") {
  const SiteConfiguration config = six_site_diamond();
  const FunctionalValue result =
      canonical_functional(config, half_filling(6), 3);
  CHECK(result.value == doctest::Approx(kHalfFillingFunctional).epsilon(1e-9));

  double total = 0.0;
  for (const auto& [mask, p] : result.ensemble.probs) {
    CHECK(Occupation{mask}.cardinality() == 3);
    CHECK(p > 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const DensityVector density = ensemble_density(result.ensemble, 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(std::abs(density[k] - 0.5) <= 1e-8);
  }
}

TEST_CASE("a deterministic density returns the bare configuration energy") {
  const SiteConfiguration config = six_site_diamond();
  const DensityVector rho = {1.0, 1.0, 1.0, 0.0, 0.0, 0.0};
  const FunctionalValue result = canonical_functional(config, rho, 3);
  CHECK(result.value == doctest::Approx(kTripleEnergy123).epsilon(1e-12));
  REQUIRE(result.ensemble.probs.size() == 1);
  CHECK(result.ensemble.probs.count(7) == 1);
  CHECK(result.ensemble.probs.at(7) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("densities outside the ensemble range are rejected") {
  const SiteConfiguration config = six_site_diamond();
  DensityVector rho = half_filling(6);
  rho[0] = 1.2;
  rho[1] = 0.8;
  CHECK_THROWS_AS(canonical_functional(config, rho, 3), InfeasibleDensity);

  rho = half_filling(6);
  rho[2] = -0.5;
  rho[3] = 1.0;
  CHECK_THROWS_AS(canonical_functional(config, rho, 3), InfeasibleDensity);

  CHECK_THROWS_AS(canonical_functional(config, half_filling(6), 2),
                  InfeasibleDensity);
  CHECK_THROWS_AS(canonical_functional(config, half_filling(6), -1),
                  CardinalityOutOfRange);
  CHECK_THROWS_AS(canonical_functional(config, DensityVector(5, 0.5), 3),
                  InvalidConfiguration);
}

TEST_CASE("the functional never beats any ensemble with the same density") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0xfea51b1eu);
  for (int trial = 0; trial < 20; ++trial) {
    const int cardinality = 1 + static_cast<int>(rng.below(5));
    const std::vector<Occupation> subsets =
        enumerate_occupations(6, cardinality);
    EnsembleState ensemble;
    double total = 0.0;
    for (int pick = 0; pick < 3; ++pick) {
      const Occupation& occ = subsets[rng.below(subsets.size())];
      const double weight = rng.uniform(0.1, 1.0);
      ensemble.probs[occ.mask] += weight;
      total += weight;
    }
    for (auto& [mask, p] : ensemble.probs) p /= total;
    const DensityVector rho = ensemble_density(ensemble, 6);
    const double reference = ensemble_energy(config, ensemble);
    const FunctionalValue best =
        canonical_functional(config, rho, cardinality);
    CHECK(best.value <= reference + 1e-8);
    const DensityVector reproduced = ensemble_density(best.ensemble, 6);
    for (int k = 0; k < 6; ++k) {
      CHECK(std::abs(reproduced[k] - rho[k]) <= 1e-8);
    }
  }
}

TEST_CASE("full and empty fillings are handled without a solver") {
  const SiteConfiguration config = six_site_diamond();
  const FunctionalValue empty =
      canonical_functional(config, DensityVector(6, 0.0), 0);
  CHECK(empty.value == 0.0);
  REQUIRE(empty.ensemble.probs.size() == 1);
  CHECK(empty.ensemble.probs.count(0) == 1);

  const FunctionalValue full =
      canonical_functional(config, DensityVector(6, 1.0), 6);
  CHECK(full.value ==
        doctest::Approx(configuration_energy(config, Occupation{63}))
            .epsilon(1e-12));
  REQUIRE(full.ensemble.probs.size() == 1);
  CHECK(full.ensemble.probs.count(63) == 1);
}

TEST_CASE("the profile of the convexity-breaking potential dips at three") {
  const SiteConfiguration config = six_site_diamond();
  const EnergyProfile profile =
      energy_profile(config, counterexample_potential());
  REQUIRE(profile.energies.size() == 7);
  CHECK(profile.violations == std::vector<int>{3});
  CHECK(profile.envelope[3] ==
        doctest::Approx(kEnvelopeAtThree).epsilon(1e-12));
  for (int n = 0; n <= 6; ++n) {
    CHECK(profile.envelope[n] <= profile.energies[n] + 1e-12);
    if (n != 3) {
      CHECK(profile.envelope[n] ==
            doctest::Approx(profile.energies[n]).epsilon(1e-12));
    }
  }
  for (int n = 1; n <= 5; ++n) {
    CHECK(profile.envelope[n] <=
          0.5 * (profile.envelope[n - 1] + profile.envelope[n + 1]) + 1e-12);
  }
}

TEST_CASE("the equalizing potential has a convex profile with a triple tie") {
  const SiteConfiguration config = six_site_diamond();
  const EnergyProfile profile =
      energy_profile(config, equalizing_potential());
  CHECK(profile.violations.empty());
  CHECK(profile.energies[2] ==
        doctest::Approx(profile.energies[3]).epsilon(1e-12));
  CHECK(std::abs(profile.energies[3] - profile.energies[4]) <= 1e-3);
  CHECK(std::abs(profile.envelope[3] - profile.energies[3]) <= 1e-3);
  CHECK(masks_of(profile.minimizers[3]) ==
        std::vector<std::uint32_t>{19, 35});
}

TEST_CASE("repulsion alone gives increasing energies and no violations") {
  const SiteConfiguration config = six_site_diamond();
  const EnergyProfile profile =
      energy_profile(config, ExternalPotential(6, 0.0));
  CHECK(profile.violations.empty());
  for (int n = 0; n <= 6; ++n) CHECK(profile.energies[n] >= 0.0);
  for (int n = 1; n <= 6; ++n) {
    CHECK(profile.energies[n] > profile.energies[n - 1] - 1e-12);
  }
}

TEST_CASE("the convexity audit flags dips and accepts affine sequences") {
  EnergyProfile profile;
  profile.energies = {0.0, -2.0, -3.0, -3.5};
  CHECK(convexity_check(profile).empty());

  profile.energies = {0.0, -1.0, -2.0, -3.0};
  CHECK(convexity_check(profile).empty());

  profile.energies = {0.0, -2.1665, -3.6187, -3.6129, -3.6450, -2.3949,
                      -0.4304};
  CHECK(convexity_check(profile) == std::vector<int>{3});
}

TEST_CASE("stored violations always match a fresh audit") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0xa0d17001u);
  for (int trial = 0; trial < 25; ++trial) {
    const ExternalPotential v = random_potential(rng, 6);
    const EnergyProfile profile = energy_profile(config, v);
    CHECK(profile.violations == convexity_check(profile));
  }
}

}  // TEST_SUITE
