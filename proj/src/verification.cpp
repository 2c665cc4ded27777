#include "sitedft/verification.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sitedft/canonical.hpp"
#include "sitedft/core.hpp"
#include "sitedft/errors.hpp"
#include "sitedft/grandcanonical.hpp"
#include "sitedft/lp.hpp"
#include "sitedft/parallel.hpp"
#include "sitedft/rng.hpp"

namespace sitedft {

namespace {

constexpr double kFunctionalTolerance = 1e-8;
constexpr double kExchangeTolerance = 1e-12;

// Planar sites resampled until every pair is separated, so downstream
// code never sees CoincidentSites.
SiteConfiguration random_planar_sites(Rng& rng, int sites,
                                      double halfwidth) {
  SiteConfiguration config;
  config.points.resize(sites);
  for (;;) {
    for (Vec3& point : config.points) {
      point = {rng.uniform(-halfwidth, halfwidth),
               rng.uniform(-halfwidth, halfwidth), 0.0};
    }
    double closest = 1e30;
    for (int j = 0; j < sites; ++j) {
      for (int k = j + 1; k < sites; ++k) {
        const double dx = config.points[j][0] - config.points[k][0];
        const double dy = config.points[j][1] - config.points[k][1];
        closest = std::min(closest, std::hypot(dx, dy));
      }
    }
    if (closest > 1e-3) return config;
  }
}

// Sites on one random line through a random origin.
SiteConfiguration random_collinear_sites(Rng& rng, int sites) {
  Vec3 direction;
  for (;;) {
    direction = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                 rng.uniform(-1.0, 1.0)};
    const double norm = std::sqrt(direction[0] * direction[0] +
                                  direction[1] * direction[1] +
                                  direction[2] * direction[2]);
    if (norm > 0.1) {
      for (double& entry : direction) entry /= norm;
      break;
    }
  }
  const Vec3 origin = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                       rng.uniform(-1.0, 1.0)};
  std::vector<double> offsets(sites);
  for (;;) {
    for (double& t : offsets) t = rng.uniform(-4.0, 4.0);
    double closest = 1e30;
    for (int j = 0; j < sites; ++j) {
      for (int k = j + 1; k < sites; ++k) {
        closest = std::min(closest, std::abs(offsets[j] - offsets[k]));
      }
    }
    if (closest > 1e-3) break;
  }
  SiteConfiguration config;
  config.points.resize(sites);
  for (int j = 0; j < sites; ++j) {
    config.points[j] = {origin[0] + offsets[j] * direction[0],
                        origin[1] + offsets[j] * direction[1],
                        origin[2] + offsets[j] * direction[2]};
  }
  return config;
}

// Marginal of a random three-component mixture of fixed-size subsets;
// the mass equals the subset size by construction.
DensityVector random_integer_mass_density(Rng& rng, int sites,
                                          int cardinality) {
  const std::vector<Occupation> subsets =
      enumerate_occupations(sites, cardinality);
  std::vector<Occupation> picks;
  std::vector<double> weights;
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    picks.push_back(subsets[rng.below(subsets.size())]);
    weights.push_back(rng.uniform(0.1, 1.0));
    total += weights.back();
  }
  DensityVector rho(sites, 0.0);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < sites; ++k) {
      if (picks[j].contains(k)) rho[k] += weights[j] / total;
    }
  }
  return rho;
}

struct FunctionalCase {
  SiteConfiguration config;
  DensityVector rho;
  int cardinality = 0;
};

// Evaluates |F - F_GC| per pregenerated case in parallel and reduces
// the slots serially, so the report is independent of jobs.
SuiteReport functional_equality_report(const char* name,
                                       const std::vector<FunctionalCase>& cases,
                                       int jobs) {
  std::vector<double> discrepancy(cases.size(), 0.0);
  parallel_for(static_cast<long>(cases.size()), jobs, [&](long index) {
    const FunctionalCase& item = cases[index];
    const double fixed =
        canonical_functional(item.config, item.rho, item.cardinality).value;
    const double relaxed = gc_functional(item.config, item.rho).value;
    discrepancy[index] = std::abs(fixed - relaxed);
  });
  SuiteReport report;
  report.name = name;
  report.trials = static_cast<long>(cases.size());
  report.tolerance = kFunctionalTolerance;
  for (double value : discrepancy) {
    report.worst = std::max(report.worst, value);
    if (value > report.tolerance) ++report.failures;
  }
  return report;
}

}  // namespace

SuiteReport run_k4_equality_suite(long trials, std::uint64_t seed, int jobs) {
  Rng rng(seed);
  std::vector<FunctionalCase> cases(trials);
  for (FunctionalCase& item : cases) {
    item.config = random_planar_sites(rng, 4, 2.0);
    item.cardinality = 1 + static_cast<int>(rng.below(3));
    item.rho = random_integer_mass_density(rng, 4, item.cardinality);
  }
  return functional_equality_report("k4-equality", cases, jobs);
}

SuiteReport run_exchange_identity_suite(long trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteReport report;
  report.name = "exchange-identity";
  report.trials = trials;
  report.tolerance = kExchangeTolerance;
  for (long trial = 0; trial < trials; ++trial) {
    const SiteConfiguration config = random_planar_sites(rng, 4, 2.0);
    const std::vector<double> interaction = all_subset_energies(config);
    const std::vector<std::vector<double>> distance =
        pair_distance_matrix(config);
    const double residual = interaction[0b0111] + interaction[0b1011] -
                            interaction[0b0011] - interaction[0b1111] +
                            1.0 / distance[2][3];
    const double value = std::abs(residual);
    report.worst = std::max(report.worst, value);
    if (value > report.tolerance) ++report.failures;
  }
  return report;
}

SuiteReport run_collinear_equality_suite(long trials, std::uint64_t seed,
                                         int jobs) {
  Rng rng(seed);
  std::vector<FunctionalCase> cases(trials);
  for (FunctionalCase& item : cases) {
    const int sites = 2 + static_cast<int>(rng.below(7));
    item.config = random_collinear_sites(rng, sites);
    item.cardinality = 1 + static_cast<int>(rng.below(sites - 1));
    item.rho = random_integer_mass_density(rng, sites, item.cardinality);
  }
  return functional_equality_report("collinear-equality", cases, jobs);
}

SuiteReport run_lp_oracle_suite(long trials, std::uint64_t seed, int jobs) {
  Rng rng(seed);
  std::vector<LinearProgram> programs(trials);
  for (LinearProgram& lp : programs) {
    const int m = 1 + static_cast<int>(rng.below(8));
    const int n = m + static_cast<int>(rng.below(17 - m));
    lp.objective.resize(n);
    for (double& c : lp.objective) c = rng.uniform(-1.0, 1.0);
    lp.constraint_matrix.assign(m, std::vector<double>(n, 1.0));
    for (int i = 1; i < m; ++i) {
      for (double& a : lp.constraint_matrix[i]) a = rng.uniform(-2.0, 2.0);
    }
    // The rhs comes from a nonnegative point, so the program is
    // feasible; the all-ones first row then bounds the feasible set.
    std::vector<double> feasible(n);
    for (double& x : feasible) x = rng.uniform(0.0, 2.0);
    lp.rhs.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        lp.rhs[i] += lp.constraint_matrix[i][j] * feasible[j];
      }
    }
  }
  std::vector<double> discrepancy(trials, 0.0);
  parallel_for(trials, jobs, [&](long index) {
    const LinearProgram& lp = programs[index];
    const LpSolution fast = solve_lp(lp);
    if (fast.status != LpStatus::Optimal) {
      // Bounded feasible programs must solve; flag via an off-scale
      // discrepancy.
      discrepancy[index] = 1e30;
      return;
    }
    const LpSolution exact = verify_by_vertex_enumeration(lp);
    double dual_value = 0.0;
    for (int i = 0; i < lp.rows(); ++i) {
      dual_value += fast.duals[i] * lp.rhs[i];
    }
    discrepancy[index] =
        std::max(std::abs(fast.objective_value - exact.objective_value),
                 std::abs(fast.objective_value - dual_value));
  });
  SuiteReport report;
  report.name = "lp-oracle";
  report.trials = trials;
  report.tolerance = kFunctionalTolerance;
  for (double value : discrepancy) {
    report.worst = std::max(report.worst, value);
    if (value > report.tolerance) ++report.failures;
  }
  return report;
}

SuiteReport run_envelope_consistency_suite(long trials, std::uint64_t seed,
                                           int jobs) {
  Rng rng(seed);
  std::vector<SiteConfiguration> configs(trials);
  std::vector<ExternalPotential> potentials(trials);
  for (long trial = 0; trial < trials; ++trial) {
    const int sites = 4 + static_cast<int>(rng.below(3));
    configs[trial] = random_planar_sites(rng, sites, 2.0);
    potentials[trial].resize(sites);
    for (double& v : potentials[trial]) v = rng.uniform(-3.0, 0.0);
  }
  std::vector<double> discrepancy(trials, 0.0);
  parallel_for(trials, jobs, [&](long index) {
    const SiteConfiguration& config = configs[index];
    const ExternalPotential& v = potentials[index];
    const EnergyProfile profile = energy_profile(config, v);
    double worst = 0.0;
    for (int count = 0; count <= config.site_count(); ++count) {
      const double relaxed =
          gc_energy(config, v, static_cast<double>(count));
      worst = std::max(worst, std::abs(relaxed - profile.envelope[count]));
    }
    discrepancy[index] = worst;
  });
  SuiteReport report;
  report.name = "envelope-consistency";
  report.trials = trials;
  report.tolerance = kFunctionalTolerance;
  for (double value : discrepancy) {
    report.worst = std::max(report.worst, value);
    if (value > report.tolerance) ++report.failures;
  }
  return report;
}

}  // namespace sitedft
