#pragma once

#include <vector>

#include "sitedft/core.hpp"

namespace sitedft {

// Minimum of c_I + sum_{i in I} v_i over the subsets of one cardinality.
// When the requested cardinality exceeds the site count the minimum is
// over an empty family; finite is false then and value must not enter
// arithmetic.
struct CanonicalEnergy {
  bool finite = true;
  double value = 0.0;
  // Every subset within kEnergyTieTolerance of the minimum, ascending
  // mask order. Empty when finite is false.
  std::vector<Occupation> minimizers;
};

// A functional value together with the ensemble attaining it.
struct FunctionalValue {
  double value = 0.0;
  EnsembleState ensemble;
};

// Ground-state energies for every electron count 0 .. K, their lower
// convex envelope, and the counts where the energies fail midpoint
// convexity.
struct EnergyProfile {
  // energies[N] is the fixed-count ground-state energy; energies[0] = 0.
  std::vector<double> energies;
  // minimizers[N] lists every optimal subset of cardinality N.
  std::vector<std::vector<Occupation>> minimizers;
  // Lower convex envelope of the points (N, energies[N]); envelope[N]
  // <= energies[N], and the sequence is midpoint convex.
  std::vector<double> envelope;
  // Counts N >= 1 with energies[N] > (energies[N-1] + energies[N+1]) / 2
  // beyond kConvexityTolerance.
  std::vector<int> violations;
};

// Subsets whose energy lies within this of the minimum are reported as
// minimizers alongside it.
inline constexpr double kEnergyTieTolerance = 1e-9;

// Midpoint-convexity violations smaller than this are treated as exact
// equality, which occurs on symmetric inputs.
inline constexpr double kConvexityTolerance = 1e-12;

// Exhaustive minimum of c_I + sum_{i in I} v_i over subsets of the given
// cardinality, with every minimizer. Cardinality 0 gives 0 with the
// empty occupation. Throws CardinalityOutOfRange for negative input.
CanonicalEnergy canonical_energy(const SiteConfiguration& config,
                                 const ExternalPotential& potential,
                                 int cardinality);

// Least mean interaction energy over ensembles supported on subsets of
// the given cardinality with site marginals rho. Requires rho in [0,1]
// componentwise and total mass equal to the cardinality within 1e-9;
// throws InfeasibleDensity otherwise.
FunctionalValue canonical_functional(const SiteConfiguration& config,
                                     const DensityVector& rho,
                                     int cardinality);

// Energies and minimizers for every count 0 .. K, the lower convex
// envelope, and the convexity violations.
EnergyProfile energy_profile(const SiteConfiguration& config,
                             const ExternalPotential& potential);

// The counts failing midpoint convexity, recomputed from the stored
// energies. Matches profile.violations.
std::vector<int> convexity_check(const EnergyProfile& profile);

}  // namespace sitedft
