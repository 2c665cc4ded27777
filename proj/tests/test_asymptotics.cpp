#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sitedft/asymptotics.hpp"
#include "sitedft/canonical.hpp"
#include "sitedft/core.hpp"
#include "sitedft/errors.hpp"
#include "sitedft/rng.hpp"
#include "test_helpers.hpp"

namespace {

using namespace sitedft;
using namespace sitedft::testing;

// Frozen by direct evaluation on the six-site reference geometry.
constexpr double kReferenceCharge = 0.20815859338494772;
constexpr double kReferenceChargeSum = 0.11516209251856163;
constexpr double kPredictedByCount[6] = {
    -2.1665,           -3.6187142857142858, -3.6187142857142858,
    -3.64503773274061, -3.64503773274061,   -3.64503773274061};

SiteConfiguration two_sites(double separation) {
  SiteConfiguration config;
  config.points = {{0.0, 0.0, 0.0}, {separation, 0.0, 0.0}};
  return config;
}

ExternalPotential random_potential(Rng& rng, int sites, double lo,
                                   double hi) {
  ExternalPotential v(sites);
  for (double& entry : v) entry = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("scale_system realizes the reference charges") {
  const ScaledNuclearSystem system =
      scale_system(six_site_diamond(), counterexample_potential(), 100.0);
  CHECK(system.ell == 100.0);
  REQUIRE(system.charges.size() == 6);
  CHECK(std::abs(system.charges[0] - kReferenceCharge) <= 1e-15);
  CHECK(system.charges[0] == system.charges[1]);
  CHECK(system.charges[4] == system.charges[5]);
  for (double z : system.charges) CHECK(z > 0.0);
  CHECK(system.positions[2][0] == doctest::Approx(-170.0).epsilon(1e-15));
  CHECK(system.positions[4][1] ==
        doctest::Approx(-100.0 * std::sqrt(0.51)).epsilon(1e-15));
}

TEST_CASE("scale_system round-trips the potential") {
  Rng rng(0x5ca1ab1eu);
  const SiteConfiguration config = six_site_diamond();
  for (int trial = 0; trial < 10; ++trial) {
    const ExternalPotential v = random_potential(rng, 6, -3.0, -0.01);
    const double ell = rng.uniform(0.5, 1e4);
    const ScaledNuclearSystem system = scale_system(config, v, ell);
    for (int k = 0; k < 6; ++k) {
      const double back = -ell * system.charges[k] * system.charges[k] / 2.0;
      CHECK(std::abs(back - v[k]) <= 1e-12);
    }
  }
}

TEST_CASE("scale_system normalizes a hydrogenic well to unit charge") {
  const ScaledNuclearSystem system =
      scale_system(two_sites(5.0), {-3.0, -3.0}, 6.0);
  CHECK(system.charges[0] == 1.0);
  CHECK(system.charges[1] == 1.0);
}

TEST_CASE("scale_system rejects non-attractive wells and bad scales") {
  const SiteConfiguration config = six_site_diamond();
  ExternalPotential v = counterexample_potential();
  v[3] = 1.0;
  CHECK_THROWS_AS(scale_system(config, v, 100.0), NonAttractivePotential);
  v[3] = 0.0;
  CHECK_THROWS_AS(scale_system(config, v, 100.0), NonAttractivePotential);
  CHECK_THROWS_AS(
      scale_system(config, counterexample_potential(), 0.0), BadRange);
  CHECK_THROWS_AS(
      scale_system(config, counterexample_potential(), -2.0), BadRange);
  CHECK_THROWS_AS(scale_system(config, ExternalPotential(4, -1.0), 100.0),
                  InvalidConfiguration);
}

TEST_CASE("leading_order_energy reproduces the reference plateau") {
  const SiteConfiguration config = six_site_diamond();
  const ExternalPotential v = counterexample_potential();
  CHECK(std::abs(leading_order_energy(config, v, 100.0, 1) -
                 kPredictedByCount[0] / 100.0) <= 1e-15);
  CHECK(std::abs(leading_order_energy(config, v, 100.0, 3) -
                 kPredictedByCount[2] / 100.0) <= 1e-15);
  CHECK(std::abs(leading_order_energy(config, v, 100.0, 5) -
                 kPredictedByCount[4] / 100.0) <= 1e-15);
  CHECK(leading_order_energy(config, v, 100.0, 10) ==
        leading_order_energy(config, v, 100.0, 6));
  CHECK_THROWS_AS(leading_order_energy(config, v, 100.0, 0),
                  CardinalityOutOfRange);
  CHECK_THROWS_AS(leading_order_energy(config, v, 0.0, 3), BadRange);
}

TEST_CASE("leading_order_energy scales as one over ell") {
  const SiteConfiguration config = six_site_diamond();
  const ExternalPotential v = counterexample_potential();
  const double reference = leading_order_energy(config, v, 1.0, 4);
  for (double ell : {0.5, 7.0, 1e4}) {
    CHECK(leading_order_energy(config, v, ell, 4) * ell ==
          doctest::Approx(reference).epsilon(1e-12));
  }
}

TEST_CASE("leading_order_energy is non-increasing in the count") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0xdecaf011u);
  for (int trial = 0; trial < 10; ++trial) {
    const ExternalPotential v = random_potential(rng, 6, -3.0, 1.0);
    double previous = leading_order_energy(config, v, 10.0, 1);
    for (int count = 2; count <= 8; ++count) {
      const double value = leading_order_energy(config, v, 10.0, count);
      CHECK(value <= previous + 1e-15);
      previous = value;
    }
  }
}

TEST_CASE("binding_report reproduces the reference step profile") {
  const BindingReport report =
      binding_report(six_site_diamond(), counterexample_potential());
  REQUIRE(report.rows.size() == 6);
  const bool expected_binds[6] = {true, true, false, true, false, false};
  const int expected_minimizer[6] = {1, 2, 2, 4, 4, 4};
  for (int n = 0; n < 6; ++n) {
    CHECK(report.rows[n].electron_count == n + 1);
    CHECK(std::abs(report.rows[n].predicted - kPredictedByCount[n]) <= 1e-12);
    CHECK(report.rows[n].binds == expected_binds[n]);
    CHECK(report.rows[n].minimizing_count == expected_minimizer[n]);
  }
}

TEST_CASE("binding_report treats the equalized tie as escaping") {
  const BindingReport report =
      binding_report(six_site_diamond(), equalizing_potential());
  REQUIRE(report.rows.size() == 6);
  const bool expected_binds[6] = {true, true, false, false, false, false};
  for (int n = 0; n < 6; ++n) {
    CHECK(report.rows[n].binds == expected_binds[n]);
  }
  CHECK(report.rows[2].minimizing_count == 2);
  CHECK(std::abs(report.rows[2].predicted - -3.6319142857142856) <= 1e-12);
}

TEST_CASE("a single attractive well binds exactly one electron") {
  const BindingReport report =
      binding_report(two_sites(2.0), {-1.0, 0.0});
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].binds);
  CHECK_FALSE(report.rows[1].binds);
}

TEST_CASE("a vanishing potential binds nothing") {
  const BindingReport report =
      binding_report(six_site_diamond(), ExternalPotential(6, 0.0));
  for (const BindingRow& row : report.rows) {
    CHECK_FALSE(row.binds);
  }
}

TEST_CASE("binds holds exactly where the prediction strictly drops") {
  const SiteConfiguration config = six_site_diamond();
  Rng rng(0xb1d1e5u);
  for (int trial = 0; trial < 25; ++trial) {
    const ExternalPotential v = random_potential(rng, 6, -3.0, 1.0);
    const BindingReport report = binding_report(config, v);
    // The empty system predicts zero.
    double previous = 0.0;
    for (const BindingRow& row : report.rows) {
      const bool drops =
          row.predicted < std::min(0.0, previous) - kBindingTolerance;
      CHECK(row.binds == drops);
      previous = row.predicted;
    }
  }
}

TEST_CASE("lieb_max_binding reproduces the reference bound") {
  const ScaledNuclearSystem far =
      scale_system(six_site_diamond(), counterexample_potential(), 1e4);
  double total = 0.0;
  for (double z : far.charges) total += z;
  CHECK(std::abs(total - kReferenceChargeSum) <= 1e-15);
  CHECK(lieb_max_binding(far) == 6);
  const ScaledNuclearSystem near =
      scale_system(six_site_diamond(), counterexample_potential(), 0.01);
  CHECK(lieb_max_binding(near) == 236);
  CHECK(lieb_max_binding(near) > lieb_max_binding(far));
}

TEST_CASE("lieb_max_binding counts a bare hydrogen atom") {
  ScaledNuclearSystem hydrogen;
  hydrogen.ell = 2.0;
  hydrogen.positions = {{0.0, 0.0, 0.0}};
  hydrogen.charges = {1.0};
  CHECK(lieb_max_binding(hydrogen) == 3);
}

TEST_CASE("lieb_max_binding validates the system") {
  ScaledNuclearSystem system;
  system.ell = 1.0;
  system.positions = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  system.charges = {1.0};
  CHECK_THROWS_AS(lieb_max_binding(system), InvalidConfiguration);
  system.charges = {1.0, 0.0};
  CHECK_THROWS_AS(lieb_max_binding(system), InvalidConfiguration);
  system.charges = {1.0, -1.0};
  CHECK_THROWS_AS(lieb_max_binding(system), InvalidConfiguration);
  system.charges = {1.0, 1.0};
  system.ell = 0.0;
  CHECK_THROWS_AS(lieb_max_binding(system), BadRange);
  system.positions.clear();
  system.charges.clear();
  system.ell = 1.0;
  CHECK_THROWS_AS(lieb_max_binding(system), InvalidConfiguration);
}

}  // TEST_SUITE
