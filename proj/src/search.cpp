#include "sitedft/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "sitedft/errors.hpp"
#include "sitedft/grandcanonical.hpp"
#include "sitedft/parallel.hpp"
#include "sitedft/rng.hpp"

namespace sitedft {

namespace {

// Density mass within this of an integer counts as that electron number.
constexpr double kMassTolerance = 1e-9;

void require_potential(const SiteConfiguration& config,
                       const ExternalPotential& potential) {
  if (static_cast<int>(potential.size()) != config.site_count()) {
    throw InvalidConfiguration(
        "potential has " + std::to_string(potential.size()) +
        " entries for " + std::to_string(config.site_count()) + " sites");
  }
}

// Hardness compares a count against both neighbours, so the count must
// lie strictly between the empty and the full system.
void require_interior_count(int cardinality, int sites) {
  if (cardinality < 1 || cardinality > sites - 1) {
    throw CardinalityOutOfRange(
        "electron count " + std::to_string(cardinality) +
        " does not lie strictly between 0 and " + std::to_string(sites));
  }
}

// Shares one subset table across the many probes of a sweep or a grid.
// The minimum is taken in ascending mask order with strict improvement,
// the same arithmetic canonical_energy uses, so probe values agree
// bitwise with the per-count ground energies.
class HardnessProbe {
 public:
  HardnessProbe(const SiteConfiguration& config, int cardinality) {
    require_interior_count(cardinality, config.site_count());
    interaction_ = all_subset_energies(config);
    for (int count = cardinality - 1; count <= cardinality + 1; ++count) {
      subsets_.push_back(enumerate_occupations(config.site_count(), count));
    }
  }

  double eta(const ExternalPotential& potential) const {
    return (minimum(potential, 0) + minimum(potential, 2)) / 2.0 -
           minimum(potential, 1);
  }

 private:
  double minimum(const ExternalPotential& potential, int which) const {
    double best = std::numeric_limits<double>::max();
    for (const Occupation& occ : subsets_[which]) {
      const double total =
          interaction_[occ.mask] + potential_sum(potential, occ);
      if (total < best) best = total;
    }
    return best;
  }

  std::vector<double> interaction_;
  std::vector<std::vector<Occupation>> subsets_;
};

}  // namespace

HardnessResult hardness(const SiteConfiguration& config,
                        const ExternalPotential& potential, int cardinality) {
  validate(config);
  require_potential(config, potential);
  require_interior_count(cardinality, config.site_count());
  HardnessResult result;
  result.potential = potential;
  result.cardinality = cardinality;
  result.profile = energy_profile(config, potential);
  result.eta = (result.profile.energies[cardinality - 1] +
                result.profile.energies[cardinality + 1]) /
                   2.0 -
               result.profile.energies[cardinality];
  result.certified = result.eta < -kCertificationMargin;
  result.evaluations = 1;
  return result;
}

HardnessResult minimize_hardness(const SiteConfiguration& config,
                                 const ExternalPotential& start,
                                 int cardinality,
                                 const std::vector<int>& frozen,
                                 long max_evaluations) {
  validate(config);
  require_potential(config, start);
  require_interior_count(cardinality, config.site_count());
  if (max_evaluations < 1) {
    throw BadRange("evaluation budget " + std::to_string(max_evaluations) +
                   " leaves no room to evaluate the start");
  }
  const int sites = config.site_count();
  std::vector<char> locked(sites, 0);
  for (int site : frozen) {
    if (site < 0 || site >= sites) {
      throw InvalidConfiguration("frozen site index " + std::to_string(site) +
                                 " does not name a site");
    }
    locked[site] = 1;
  }
  // Single-coordinate moves alone stall on this piecewise-linear
  // landscape wherever the descent direction deepens two sites at once,
  // so the pattern also carries equal paired moves.
  struct Direction {
    int a;
    // Second moved coordinate, or -1 for a single-coordinate move.
    int b;
    double sign;
  };
  std::vector<Direction> directions;
  for (int site = 0; site < sites; ++site) {
    if (locked[site]) continue;
    directions.push_back({site, -1, -1.0});
    directions.push_back({site, -1, 1.0});
  }
  for (int a = 0; a < sites; ++a) {
    if (locked[a]) continue;
    for (int b = a + 1; b < sites; ++b) {
      if (locked[b]) continue;
      directions.push_back({a, b, -1.0});
      directions.push_back({a, b, 1.0});
    }
  }
  const HardnessProbe probe(config, cardinality);
  ExternalPotential current = start;
  double current_eta = probe.eta(current);
  long evaluations = 1;
  double step = kInitialSearchStep;
  while (step >= kSearchStepFloor && evaluations < max_evaluations) {
    bool accepted = false;
    for (const Direction& direction : directions) {
      if (evaluations >= max_evaluations) break;
      ExternalPotential candidate = current;
      candidate[direction.a] += direction.sign * step;
      if (direction.b >= 0) candidate[direction.b] += direction.sign * step;
      const double candidate_eta = probe.eta(candidate);
      ++evaluations;
      if (candidate_eta < current_eta) {
        current = std::move(candidate);
        current_eta = candidate_eta;
        accepted = true;
        break;
      }
    }
    if (!accepted) step *= 0.5;
  }
  HardnessResult result = hardness(config, current, cardinality);
  result.evaluations = evaluations;
  return result;
}

HardnessGrid hardness_grid(const SiteConfiguration& config,
                           std::pair<double, double> v1_range,
                           std::pair<double, double> v3_range, int steps,
                           double fixed_vertical) {
  validate(config);
  if (config.site_count() != 6) {
    throw BadRange("the magnitude grid pairs sites (1,2), (3,4), (5,6) and "
                   "needs exactly six sites, not " +
                   std::to_string(config.site_count()));
  }
  const auto check_range = [](std::pair<double, double> range,
                              const char* name) {
    if (!(range.first > 0.0) || !(range.second > 0.0)) {
      throw BadRange(std::string(name) + " magnitudes must be positive");
    }
    if (range.second < range.first) {
      throw BadRange(std::string(name) + " range ends below its start");
    }
  };
  check_range(v1_range, "inner-pair");
  check_range(v3_range, "outer-pair");
  if (steps < 2) {
    throw BadRange("grid needs at least two steps per axis, got " +
                   std::to_string(steps));
  }
  HardnessGrid grid;
  grid.v1_magnitudes.resize(steps);
  grid.v3_magnitudes.resize(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    grid.v1_magnitudes[i] =
        v1_range.first + t * (v1_range.second - v1_range.first);
    grid.v3_magnitudes[i] =
        v3_range.first + t * (v3_range.second - v3_range.first);
  }
  const HardnessProbe probe(config, 3);
  grid.eta.resize(static_cast<std::size_t>(steps) * steps);
  ExternalPotential potential(6, fixed_vertical);
  for (int i = 0; i < steps; ++i) {
    potential[0] = potential[1] = -grid.v1_magnitudes[i];
    for (int j = 0; j < steps; ++j) {
      potential[2] = potential[3] = -grid.v3_magnitudes[j];
      grid.eta[static_cast<std::size_t>(i) * steps + j] = probe.eta(potential);
    }
  }
  return grid;
}

GapSample gap_at_density(const SiteConfiguration& config,
                         const DensityVector& rho, int cardinality) {
  GapSample sample;
  sample.config = config;
  sample.rho = rho;
  sample.f_canonical = canonical_functional(config, rho, cardinality).value;
  sample.f_gc = gc_functional(config, rho).value;
  sample.gap = sample.f_canonical - sample.f_gc;
  sample.relative_gap =
      sample.f_canonical > 0.0 ? sample.gap / sample.f_canonical : 0.0;
  return sample;
}

GapSample diamond_gap(double a, double b, double h) {
  const SiteConfiguration config = diamond_configuration(a, b, h);
  return gap_at_density(config, DensityVector(6, 0.5), 3);
}

std::vector<GapSample> random_geometry_search(
    int sites, long trials, double box_halfwidth, std::uint64_t seed,
    const std::optional<DensityVector>& rho, int jobs,
    bool three_dimensional) {
  if (sites < 2 || sites > kMaxSites) {
    throw InvalidConfiguration("site count " + std::to_string(sites) +
                               " lies outside 2 .. " +
                               std::to_string(kMaxSites));
  }
  if (trials < 0) {
    throw BadRange("trial count must not be negative");
  }
  if (!(box_halfwidth > 0.0)) {
    throw BadRange("box halfwidth must be positive");
  }
  DensityVector density;
  int cardinality = 0;
  if (rho.has_value()) {
    density = *rho;
    if (static_cast<int>(density.size()) != sites) {
      throw InvalidConfiguration(
          "density has " + std::to_string(density.size()) + " entries for " +
          std::to_string(sites) + " sites");
    }
    const double mass = density_mass(density);
    cardinality = static_cast<int>(std::llround(mass));
    if (std::abs(mass - cardinality) > kMassTolerance) {
      throw InfeasibleDensity("density mass " + std::to_string(mass) +
                              " is not an electron count");
    }
  } else {
    if (sites % 2 != 0) {
      throw InvalidConfiguration(
          "half filling of " + std::to_string(sites) +
          " sites has no electron count; give a density instead");
    }
    density.assign(sites, 0.5);
    cardinality = sites / 2;
  }
  // All coordinates come from one serial stream, so the samples are a
  // function of the seed alone, never of the worker count.
  Rng rng(seed);
  std::vector<SiteConfiguration> draws(trials);
  for (long trial = 0; trial < trials; ++trial) {
    draws[trial].points.resize(sites);
    for (int k = 0; k < sites; ++k) {
      Vec3& point = draws[trial].points[k];
      point[0] = rng.uniform(-box_halfwidth, box_halfwidth);
      point[1] = rng.uniform(-box_halfwidth, box_halfwidth);
      point[2] =
          three_dimensional ? rng.uniform(-box_halfwidth, box_halfwidth) : 0.0;
    }
  }
  std::vector<std::optional<GapSample>> slots(trials);
  if (jobs < 1) jobs = 1;
  parallel_for(trials, jobs, [&](long trial) {
    try {
      slots[trial] = gap_at_density(draws[trial], density, cardinality);
    } catch (const CoincidentSites&) {
      // A draw with two overlapping sites yields no sample.
    }
  });
  std::vector<GapSample> kept;
  for (long trial = 0; trial < trials; ++trial) {
    if (slots[trial].has_value() && slots[trial]->gap > kCertificationMargin) {
      kept.push_back(std::move(*slots[trial]));
    }
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const GapSample& a, const GapSample& b) {
                     return a.gap > b.gap;
                   });
  return kept;
}

CertificationReport certify_counterexample(const SiteConfiguration& config,
                                           const ExternalPotential& potential,
                                           int cardinality) {
  validate(config);
  require_potential(config, potential);
  require_interior_count(cardinality, config.site_count());
  CertificationReport report;
  report.cardinality = cardinality;
  report.below = canonical_energy(config, potential, cardinality - 1);
  report.at = canonical_energy(config, potential, cardinality);
  report.above = canonical_energy(config, potential, cardinality + 1);
  report.midpoint = (report.below.value + report.above.value) / 2.0;
  report.margin = report.at.value - report.midpoint;
  report.passed = report.margin > kCertificationMargin;
  return report;
}

}  // namespace sitedft
