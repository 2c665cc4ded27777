#include "sitedft/canonical.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "sitedft/errors.hpp"
#include "sitedft/lp.hpp"

namespace sitedft {

namespace {

// Slack applied to the [0, 1] bounds and the mass test of a requested
// density.
constexpr double kDensityTolerance = 1e-9;

void require_potential(const SiteConfiguration& config,
                       const ExternalPotential& potential) {
  if (static_cast<int>(potential.size()) != config.site_count()) {
    throw InvalidConfiguration(
        "potential has " + std::to_string(potential.size()) +
        " entries for " + std::to_string(config.site_count()) + " sites");
  }
}

void require_density(const DensityVector& rho, int site_count) {
  if (static_cast<int>(rho.size()) != site_count) {
    throw InvalidConfiguration(
        "density has " + std::to_string(rho.size()) + " entries for " +
        std::to_string(site_count) + " sites");
  }
  for (int k = 0; k < site_count; ++k) {
    if (rho[k] < -kDensityTolerance || rho[k] > 1.0 + kDensityTolerance) {
      throw InfeasibleDensity("site occupation " + std::to_string(rho[k]) +
                              " at site " + std::to_string(k + 1) +
                              " lies outside [0, 1]");
    }
  }
}

}  // namespace

CanonicalEnergy canonical_energy(const SiteConfiguration& config,
                                 const ExternalPotential& potential,
                                 int cardinality) {
  validate(config);
  require_potential(config, potential);
  if (cardinality < 0) {
    throw CardinalityOutOfRange("electron count " +
                                std::to_string(cardinality) + " is negative");
  }
  CanonicalEnergy result;
  if (cardinality > config.site_count()) {
    result.finite = false;
    result.value = std::numeric_limits<double>::infinity();
    return result;
  }
  if (cardinality == 0) {
    result.value = 0.0;
    result.minimizers.push_back(Occupation{0});
    return result;
  }
  const std::vector<double> interaction = all_subset_energies(config);
  const std::vector<Occupation> subsets =
      enumerate_occupations(config.site_count(), cardinality);
  double best = std::numeric_limits<double>::max();
  for (const Occupation& occ : subsets) {
    const double total = interaction[occ.mask] + potential_sum(potential, occ);
    if (total < best) best = total;
  }
  result.value = best;
  for (const Occupation& occ : subsets) {
    const double total = interaction[occ.mask] + potential_sum(potential, occ);
    if (total <= best + kEnergyTieTolerance) result.minimizers.push_back(occ);
  }
  return result;
}

FunctionalValue canonical_functional(const SiteConfiguration& config,
                                     const DensityVector& rho,
                                     int cardinality) {
  validate(config);
  if (cardinality < 0) {
    throw CardinalityOutOfRange("electron count " +
                                std::to_string(cardinality) + " is negative");
  }
  const int sites = config.site_count();
  require_density(rho, sites);
  const double mass = density_mass(rho);
  if (std::abs(mass - cardinality) > kDensityTolerance) {
    throw InfeasibleDensity("density mass " + std::to_string(mass) +
                            " does not equal the electron count " +
                            std::to_string(cardinality));
  }
  FunctionalValue result;
  if (cardinality == 0) {
    result.value = 0.0;
    result.ensemble.probs[0] = 1.0;
    return result;
  }
  const std::vector<double> interaction = all_subset_energies(config);
  if (cardinality == sites) {
    const std::uint32_t full = (std::uint32_t{1} << sites) - 1;
    result.value = interaction[full];
    result.ensemble.probs[full] = 1.0;
    return result;
  }
  // Minimize sum_I p_I c_I over distributions on cardinality-N subsets
  // with the site marginals pinned to rho. Normalization is implied:
  // the marginal rows sum to N times it.
  const std::vector<Occupation> columns =
      enumerate_occupations(sites, cardinality);
  LinearProgram lp;
  const std::size_t n = columns.size();
  lp.objective.resize(n);
  lp.constraint_matrix.assign(sites, std::vector<double>(n, 0.0));
  lp.rhs = rho;
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective[j] = interaction[columns[j].mask];
    for (int k = 0; k < sites; ++k) {
      if (columns[j].contains(k)) lp.constraint_matrix[k][j] = 1.0;
    }
  }
  const LpSolution solution = solve_lp(lp);
  if (solution.status == LpStatus::Infeasible) {
    throw InfeasibleDensity(
        "no ensemble of cardinality " + std::to_string(cardinality) +
        " attains the requested site occupations");
  }
  if (solution.status != LpStatus::Optimal) {
    throw NumericalBreakdown("bounded marginal program reported unbounded");
  }
  result.value = solution.objective_value;
  result.ensemble = make_ensemble(columns, solution.primal);
  return result;
}

EnergyProfile energy_profile(const SiteConfiguration& config,
                             const ExternalPotential& potential) {
  const int sites = config.site_count();
  EnergyProfile profile;
  profile.energies.reserve(sites + 1);
  profile.minimizers.reserve(sites + 1);
  for (int n = 0; n <= sites; ++n) {
    CanonicalEnergy energy = canonical_energy(config, potential, n);
    profile.energies.push_back(energy.value);
    profile.minimizers.push_back(std::move(energy.minimizers));
  }
  // Lower convex envelope by a monotone chain over (N, E_N). A point on
  // the chord between its neighbours stays on the hull, so exact
  // equalities never register as violations downstream.
  std::vector<int> hull;
  for (int n = 0; n <= sites; ++n) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull[hull.size() - 1];
      const double cross =
          static_cast<double>(b - a) * (profile.energies[n] -
                                        profile.energies[a]) -
          (profile.energies[b] - profile.energies[a]) *
              static_cast<double>(n - a);
      if (cross < 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(n);
  }
  profile.envelope.assign(sites + 1, 0.0);
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int lo = hull[h];
    const int hi = hull[h + 1];
    const double slope =
        (profile.energies[hi] - profile.energies[lo]) / (hi - lo);
    for (int n = lo; n < hi; ++n) {
      profile.envelope[n] = profile.energies[lo] + slope * (n - lo);
    }
  }
  profile.envelope[sites] = profile.energies[sites];
  profile.violations = convexity_check(profile);
  return profile;
}

std::vector<int> convexity_check(const EnergyProfile& profile) {
  std::vector<int> violations;
  const int count = static_cast<int>(profile.energies.size());
  for (int n = 1; n + 1 < count; ++n) {
    const double midpoint =
        0.5 * (profile.energies[n - 1] + profile.energies[n + 1]);
    if (profile.energies[n] > midpoint + kConvexityTolerance) {
      violations.push_back(n);
    }
  }
  return violations;
}

}  // namespace sitedft
