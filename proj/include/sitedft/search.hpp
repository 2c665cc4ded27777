#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sitedft/canonical.hpp"
#include "sitedft/core.hpp"

namespace sitedft {

// A hardness below this counts as a certified convexity violation;
// functional gaps above it count as genuine.
inline constexpr double kCertificationMargin = 1e-9;

// Compass search step schedule: start, then halve on sweeps without an
// accepted move, and stop below the floor.
inline constexpr double kInitialSearchStep = 1e-2;
inline constexpr double kSearchStepFloor = 1e-6;

// Default evaluation budget of minimize_hardness.
inline constexpr long kMaxHardnessEvaluations = 100000;

// Hardness of a potential at one electron count: the midpoint of the
// neighbouring ground-state energies minus the energy at the count.
// Negative values witness a failure of energy convexity.
struct HardnessResult {
  ExternalPotential potential;
  int cardinality = 0;
  // (energies[N-1] + energies[N+1]) / 2 - energies[N] at the cardinality.
  double eta = 0.0;
  EnergyProfile profile;
  // eta < -kCertificationMargin.
  bool certified = false;
  // Hardness evaluations spent producing this result.
  long evaluations = 0;
};

// Fixed-count versus free-cardinality functional values at one density.
struct GapSample {
  SiteConfiguration config;
  DensityVector rho;
  double f_canonical = 0.0;
  double f_gc = 0.0;
  // f_canonical - f_gc; never meaningfully negative because the
  // free-cardinality program relaxes the fixed-count one.
  double gap = 0.0;
  // gap / f_canonical when f_canonical > 0, else 0.
  double relative_gap = 0.0;
};

// Rectangular hardness evaluation over potential magnitudes, for the
// six-site slice v1 = v2 = -|v1|, v3 = v4 = -|v3|, v5 = v6 fixed.
struct HardnessGrid {
  std::vector<double> v1_magnitudes;
  std::vector<double> v3_magnitudes;
  // Row-major, |v1| outer, |v3| inner.
  std::vector<double> eta;
};

// Exhaustive convexity audit at one count: the neighbouring energies,
// their midpoint, and the margin by which the count sits above it.
struct CertificationReport {
  int cardinality = 0;
  CanonicalEnergy below;
  CanonicalEnergy at;
  CanonicalEnergy above;
  double midpoint = 0.0;
  // at.value - midpoint; positive means convexity fails at the count.
  double margin = 0.0;
  // margin > kCertificationMargin.
  bool passed = false;
};

// Hardness at the given count, with the full energy profile. Requires
// 1 <= cardinality <= K - 1; throws CardinalityOutOfRange otherwise.
HardnessResult hardness(const SiteConfiguration& config,
                        const ExternalPotential& potential,
                        int cardinality = 3);

// Derivative-free pattern search. The move set holds, in order, every
// single-coordinate step and every equal two-coordinate step over the
// unfrozen sites, minus before plus, ascending site order. The first
// strict improvement restarts the sweep; a sweep without one halves the
// step. Stops when the step falls below kSearchStepFloor or the
// evaluation budget is spent. Frozen sites are never moved.
// Deterministic; never returns a result worse than the start.
HardnessResult minimize_hardness(const SiteConfiguration& config,
                                 const ExternalPotential& start,
                                 int cardinality,
                                 const std::vector<int>& frozen = {},
                                 long max_evaluations = kMaxHardnessEvaluations);

// Hardness at three electrons over an inclusive steps-by-steps grid of
// potential magnitudes. Requires a six-site configuration, positive
// magnitude ranges with high >= low, and steps >= 2; throws BadRange
// otherwise.
HardnessGrid hardness_grid(const SiteConfiguration& config,
                           std::pair<double, double> v1_range,
                           std::pair<double, double> v3_range, int steps,
                           double fixed_vertical);

// Both functional values and their gap at one density of integer mass.
GapSample gap_at_density(const SiteConfiguration& config,
                         const DensityVector& rho, int cardinality);

// Gap at half filling for sites (-a,0,0), (a,0,0), (-b,0,0), (b,0,0),
// (0,-h,0), (0,h,0). Requires 0 < a < b and h > 0.
GapSample diamond_gap(double a, double b, double h);

// Seeded search over uniform site draws from [-w, w]^2 (z = 0 unless
// three_dimensional), evaluating the gap at the given density, or at
// half filling when none is given; an odd site count then throws
// InvalidConfiguration. Returns the samples with gap above
// kCertificationMargin, sorted by descending gap, ties in trial order.
// Deterministic for a given seed, independent of jobs.
std::vector<GapSample> random_geometry_search(
    int sites, long trials, double box_halfwidth, std::uint64_t seed,
    const std::optional<DensityVector>& rho = std::nullopt, int jobs = 1,
    bool three_dimensional = false);

// Recomputes the three energies around the count by exhaustive
// enumeration and reports whether the count certifiably violates
// convexity. Requires 1 <= cardinality <= K - 1.
CertificationReport certify_counterexample(const SiteConfiguration& config,
                                           const ExternalPotential& potential,
                                           int cardinality);

}  // namespace sitedft
