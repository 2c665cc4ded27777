#pragma once

#include <map>
#include <vector>

#include "sitedft/canonical.hpp"
#include "sitedft/core.hpp"

namespace sitedft {

// Reconstructed functional values must match the primal optimum within
// this (strong duality realized in floating point).
inline constexpr double kDualityTolerance = 1e-7;

// A subset's dual constraint counts as active when its slack is within
// this of zero; the same slack bound certifies dual feasibility.
inline constexpr double kDualSlackTolerance = 1e-8;

// Dual solution of the density-constrained ensemble program. The
// potential realizes the functional value through strong duality:
// F = gc_ground_energy - sum_k v_k rho_k within kDualityTolerance.
struct DualCertificate {
  // v_k, minus the multiplier of the site-k marginal constraint.
  ExternalPotential potential;
  // Multiplier of the normalization constraint; equals the ensemble
  // ground-state energy min_I (c_I + sum_{i in I} v_i), never above 0
  // because the empty subset competes.
  double gc_ground_energy = 0.0;
  // |F - (gc_ground_energy - sum_k v_k rho_k)|.
  double gap_check = 0.0;
  // Subsets with c_I + sum v_i within kDualSlackTolerance of the ground
  // energy, ascending mask order.
  std::vector<Occupation> active_subsets;
  // Dimension of the affine set cut out by the active constraints. Zero
  // means the potential is locally unique; a positive value witnesses a
  // degenerate dual face.
  int face_dimension = 0;
};

// Image of each site under a geometry symmetry; entry k is where site k
// goes.
using SitePermutation = std::vector<int>;

// Least mean interaction energy over ensembles of arbitrary cardinality
// with site marginals rho. Requires rho in [0, 1] componentwise; any
// such density is attainable. Never above the fixed-cardinality
// functional wherever that one is feasible.
FunctionalValue gc_functional(const SiteConfiguration& config,
                              const DensityVector& rho);

// Least mean energy sum_I p_I (c_I + sum_{i in I} v_i) over normalized
// ensembles with mean cardinality mean_count. Requires 0 <= mean_count
// <= K; throws MassOutOfRange otherwise. At integer mean_count this is
// the lower convex envelope of the fixed-count energies.
double gc_energy(const SiteConfiguration& config,
                 const ExternalPotential& potential, double mean_count);

// Dual potential certifying the value of gc_functional at rho.
//
// With no options the raw simplex multipliers are returned. Symmetry
// permutations must preserve the interactions and rho; the potential is
// then averaged over the group they generate, which keeps optimality
// because the dual optimal face is convex and permutation covariant.
// Pinned entries fix v at the given sites and select the remaining
// potential from the pinned symmetric part of the optimal face, at the
// midpoint of the attainable ground-energy range; throws
// InvalidConfiguration when the pins exclude the whole face.
DualCertificate dual_potential(
    const SiteConfiguration& config, const DensityVector& rho,
    const std::vector<SitePermutation>& symmetry = {},
    const std::map<int, double>& pinned = {});

}  // namespace sitedft
