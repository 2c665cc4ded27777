// Site model of classical electrons with a Riesz pair interaction.
// Core types and enumeration primitives shared by every other module.
// Atomic units throughout: lengths in Bohr radii, energies in Hartree.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sitedft/errors.hpp"

namespace sitedft {

// Site counts are capped so subsets fit into a 32-bit mask with headroom.
inline constexpr int kMaxSites = 20;

// Pairwise separations at or below this bound count as coincident.
inline constexpr double kMinSiteSeparation = 1e-12;

// Ensemble probabilities must sum to one within this tolerance.
inline constexpr double kEnsembleTolerance = 1e-10;

// Ensemble weights at or below this are rounding dust, not support.
inline constexpr double kProbabilityFloor = 1e-12;

using Vec3 = std::array<double, 3>;

// K distinct sites carrying the interaction kernel |r|^(-exponent_s).
// Valid configurations have 2 <= K <= kMaxSites, exponent_s > 0, finite
// coordinates, and pairwise separations above kMinSiteSeparation.
struct SiteConfiguration {
  std::vector<Vec3> points;
  double exponent_s = 1.0;

  int site_count() const { return static_cast<int>(points.size()); }
};

// An electron placement: site k (zero-based) is occupied iff bit k of
// mask is set. Printed output and configuration files number sites from
// one; the API is zero-based everywhere.
struct Occupation {
  std::uint32_t mask = 0;

  Occupation() = default;
  explicit Occupation(std::uint32_t m) : mask(m) {}

  int cardinality() const { return std::popcount(mask); }
  bool contains(int site) const { return (mask >> site) & 1u; }

  friend bool operator==(const Occupation& a, const Occupation& b) {
    return a.mask == b.mask;
  }
  friend bool operator<(const Occupation& a, const Occupation& b) {
    return a.mask < b.mask;
  }
};

// Per-site external potential v_k. Length must equal the site count of
// the configuration it is used with.
using ExternalPotential = std::vector<double>;

// Per-site occupation probabilities rho_k in [0, 1].
using DensityVector = std::vector<double>;

// A probability distribution over occupations, keyed by mask. Keys are
// ordered, so iteration is deterministic.
struct EnsembleState {
  std::map<std::uint32_t, double> probs;
};

// Throws InvalidConfiguration or CoincidentSites when an invariant of
// SiteConfiguration fails.
void validate(const SiteConfiguration& config);

// Euclidean distances; symmetric with a zero diagonal. Throws
// CoincidentSites when any off-diagonal entry is at or below
// kMinSiteSeparation.
std::vector<std::vector<double>> pair_distance_matrix(
    const SiteConfiguration& config);

// Pair interaction strengths d^(-exponent_s); zero diagonal.
std::vector<std::vector<double>> pair_energy_matrix(
    const SiteConfiguration& config);

// Total interaction energy c_I of the occupied sites, summed over
// unordered pairs. Zero when fewer than two sites are occupied.
double configuration_energy(const SiteConfiguration& config,
                            const Occupation& occ);

// c_I for every mask 0 .. 2^K - 1, indexed by mask.
std::vector<double> all_subset_energies(const SiteConfiguration& config);

// All occupations of site_count sites in ascending mask order; with
// cardinality given, only the subsets of that size (still ascending).
std::vector<Occupation> enumerate_occupations(
    int site_count, std::optional<int> cardinality = std::nullopt);

// Sum of v_i over the occupied sites. The mask must not address sites
// beyond the potential.
double potential_sum(const ExternalPotential& potential, const Occupation& occ);

// Normalized ensemble over the given subsets with the given weights.
// Entries at or below kProbabilityFloor are treated as rounding dust and
// dropped; the rest are rescaled to total mass one.
EnsembleState make_ensemble(const std::vector<Occupation>& subsets,
                            const std::vector<double>& weights);

// Mean energy sum_I p_I * c_I of a normalized ensemble.
double ensemble_energy(const SiteConfiguration& config,
                       const EnsembleState& ensemble);

// Mean energy including the external term, sum_I p_I (c_I + sum_{i in I} v_i).
double ensemble_energy(const SiteConfiguration& config,
                       const EnsembleState& ensemble,
                       const ExternalPotential& potential);

// Site marginals rho_k = sum_{I ni k} p_I of a normalized ensemble.
DensityVector ensemble_density(const EnsembleState& ensemble, int site_count);

// Total mass sum_k rho_k.
double density_mass(const DensityVector& rho);

// Six planar sites (-a,0,0), (a,0,0), (-b,0,0), (b,0,0), (0,-h,0),
// (0,h,0). Requires 0 < a < b and h > 0; throws DegenerateGeometry
// otherwise.
SiteConfiguration diamond_configuration(double a, double b, double h);

}  // namespace sitedft
