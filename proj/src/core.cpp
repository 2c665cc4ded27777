#include "sitedft/core.hpp"

#include <cmath>
#include <string>

namespace sitedft {

namespace {

double distance(const Vec3& p, const Vec3& q) {
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  const double dz = p[2] - q[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void check_mask(const SiteConfiguration& config, std::uint32_t mask) {
  const int k = config.site_count();
  if (k < 32 && mask >= (std::uint32_t{1} << k)) {
    throw CardinalityOutOfRange("occupation mask " + std::to_string(mask) +
                                " references sites beyond the " +
                                std::to_string(k) + "-site configuration");
  }
}

void check_normalized(const EnsembleState& ensemble) {
  double total = 0.0;
  for (const auto& [mask, p] : ensemble.probs) {
    if (!(p >= -kEnsembleTolerance) || !(p <= 1.0 + kEnsembleTolerance)) {
      throw UnnormalizedEnsemble("ensemble probability " + std::to_string(p) +
                                 " lies outside [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kEnsembleTolerance) {
    throw UnnormalizedEnsemble("ensemble probabilities sum to " +
                               std::to_string(total));
  }
}

}  // namespace

void validate(const SiteConfiguration& config) {
  const int k = config.site_count();
  if (k < 2 || k > kMaxSites) {
    throw InvalidConfiguration("site count " + std::to_string(k) +
                               " is outside [2, " +
                               std::to_string(kMaxSites) + "]");
  }
  if (!(config.exponent_s > 0.0) || !std::isfinite(config.exponent_s)) {
    throw InvalidConfiguration("interaction exponent must be positive");
  }
  for (const Vec3& p : config.points) {
    for (double coordinate : p) {
      if (!std::isfinite(coordinate)) {
        throw InvalidConfiguration("site coordinates must be finite");
      }
    }
  }
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      if (distance(config.points[j], config.points[l]) <= kMinSiteSeparation) {
        throw CoincidentSites("sites " + std::to_string(j + 1) + " and " +
                              std::to_string(l + 1) + " coincide");
      }
    }
  }
}

std::vector<std::vector<double>> pair_distance_matrix(
    const SiteConfiguration& config) {
  validate(config);
  const int k = config.site_count();
  std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      const double r = distance(config.points[j], config.points[l]);
      d[j][l] = r;
      d[l][j] = r;
    }
  }
  return d;
}

std::vector<std::vector<double>> pair_energy_matrix(
    const SiteConfiguration& config) {
  std::vector<std::vector<double>> w = pair_distance_matrix(config);
  const int k = config.site_count();
  for (int j = 0; j < k; ++j) {
    for (int l = 0; l < k; ++l) {
      if (j != l) w[j][l] = std::pow(w[j][l], -config.exponent_s);
    }
  }
  return w;
}

double configuration_energy(const SiteConfiguration& config,
                            const Occupation& occ) {
  check_mask(config, occ.mask);
  if (occ.cardinality() <= 1) return 0.0;
  const std::vector<std::vector<double>> w = pair_energy_matrix(config);
  const int k = config.site_count();
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    if (!occ.contains(j)) continue;
    for (int l = j + 1; l < k; ++l) {
      if (occ.contains(l)) total += w[j][l];
    }
  }
  return total;
}

std::vector<double> all_subset_energies(const SiteConfiguration& config) {
  const std::vector<std::vector<double>> w = pair_energy_matrix(config);
  const int k = config.site_count();
  const std::uint32_t count = std::uint32_t{1} << k;
  std::vector<double> energy(count, 0.0);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    double added = 0.0;
    for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1) {
      added += w[low][std::countr_zero(bits)];
    }
    energy[mask] = energy[rest] + added;
  }
  return energy;
}

std::vector<Occupation> enumerate_occupations(int site_count,
                                              std::optional<int> cardinality) {
  if (site_count < 1 || site_count > kMaxSites) {
    throw InvalidConfiguration("site count " + std::to_string(site_count) +
                               " is outside [1, " +
                               std::to_string(kMaxSites) + "]");
  }
  const std::uint32_t count = std::uint32_t{1} << site_count;
  std::vector<Occupation> result;
  if (!cardinality.has_value()) {
    result.reserve(count);
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      result.emplace_back(mask);
    }
    return result;
  }
  const int n = *cardinality;
  if (n < 0 || n > site_count) {
    throw CardinalityOutOfRange("cardinality " + std::to_string(n) +
                                " is outside [0, " +
                                std::to_string(site_count) + "]");
  }
  if (n == 0) {
    result.emplace_back(0u);
    return result;
  }
  // Gosper's hack walks the cardinality-n masks in ascending order.
  std::uint32_t mask = (std::uint32_t{1} << n) - 1;
  while (mask < count) {
    result.emplace_back(mask);
    const std::uint32_t c = mask & (0u - mask);
    const std::uint32_t r = mask + c;
    if (r >= count || c == 0) break;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return result;
}

double potential_sum(const ExternalPotential& potential,
                     const Occupation& occ) {
  if (potential.size() < 32 &&
      (occ.mask >> potential.size()) != 0) {
    throw InvalidConfiguration("occupation addresses a site beyond the " +
                               std::to_string(potential.size()) +
                               "-entry potential");
  }
  double total = 0.0;
  for (std::uint32_t bits = occ.mask; bits != 0; bits &= bits - 1) {
    total += potential[std::countr_zero(bits)];
  }
  return total;
}

EnsembleState make_ensemble(const std::vector<Occupation>& subsets,
                            const std::vector<double>& weights) {
  if (subsets.size() != weights.size()) {
    throw InvalidConfiguration("each subset needs exactly one weight");
  }
  EnsembleState ensemble;
  double total = 0.0;
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    if (weights[j] > kProbabilityFloor) {
      ensemble.probs[subsets[j].mask] += weights[j];
      total += weights[j];
    }
  }
  if (!(total > 0.0)) {
    throw UnnormalizedEnsemble("ensemble weights carry no mass");
  }
  for (auto& [mask, p] : ensemble.probs) p /= total;
  return ensemble;
}

double ensemble_energy(const SiteConfiguration& config,
                       const EnsembleState& ensemble) {
  check_normalized(ensemble);
  const std::vector<double> energy = all_subset_energies(config);
  double total = 0.0;
  for (const auto& [mask, p] : ensemble.probs) {
    check_mask(config, mask);
    total += p * energy[mask];
  }
  return total;
}

double ensemble_energy(const SiteConfiguration& config,
                       const EnsembleState& ensemble,
                       const ExternalPotential& potential) {
  const int k = config.site_count();
  if (static_cast<int>(potential.size()) != k) {
    throw InvalidConfiguration("potential has " +
                               std::to_string(potential.size()) +
                               " entries for " + std::to_string(k) + " sites");
  }
  double total = ensemble_energy(config, ensemble);
  for (const auto& [mask, p] : ensemble.probs) {
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
      total += p * potential[std::countr_zero(bits)];
    }
  }
  return total;
}

DensityVector ensemble_density(const EnsembleState& ensemble, int site_count) {
  if (site_count < 1 || site_count > kMaxSites) {
    throw InvalidConfiguration("site count " + std::to_string(site_count) +
                               " is outside [1, " +
                               std::to_string(kMaxSites) + "]");
  }
  check_normalized(ensemble);
  DensityVector rho(site_count, 0.0);
  const std::uint32_t count = std::uint32_t{1} << site_count;
  for (const auto& [mask, p] : ensemble.probs) {
    if (mask >= count) {
      throw CardinalityOutOfRange("occupation mask " + std::to_string(mask) +
                                  " references sites beyond the " +
                                  std::to_string(site_count) +
                                  "-site configuration");
    }
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
      rho[std::countr_zero(bits)] += p;
    }
  }
  return rho;
}

double density_mass(const DensityVector& rho) {
  double mass = 0.0;
  for (double r : rho) mass += r;
  return mass;
}

SiteConfiguration diamond_configuration(double a, double b, double h) {
  if (!(0.0 < a) || !(a < b) || !(h > 0.0) || !std::isfinite(a) ||
      !std::isfinite(b) || !std::isfinite(h)) {
    throw DegenerateGeometry("diamond parameters require 0 < a < b and h > 0");
  }
  SiteConfiguration config;
  config.points = {
      Vec3{-a, 0.0, 0.0}, Vec3{a, 0.0, 0.0},  Vec3{-b, 0.0, 0.0},
      Vec3{b, 0.0, 0.0},  Vec3{0.0, -h, 0.0}, Vec3{0.0, h, 0.0},
  };
  validate(config);
  return config;
}

}  // namespace sitedft
