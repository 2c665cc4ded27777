#include "sitedft/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sitedft/canonical.hpp"
#include "sitedft/errors.hpp"

namespace sitedft {

namespace {

void require_potential(const SiteConfiguration& config,
                       const ExternalPotential& potential) {
  if (static_cast<int>(potential.size()) != config.site_count()) {
    throw InvalidConfiguration(
        "potential has " + std::to_string(potential.size()) +
        " entries for " + std::to_string(config.site_count()) + " sites");
  }
}

void require_scale(double ell) {
  if (!(ell > 0.0)) {
    throw BadRange("scale parameter must be positive, got " +
                   std::to_string(ell));
  }
}

// Classical ground energies for counts 0 .. K, index by count.
std::vector<double> ground_energies(const SiteConfiguration& config,
                                    const ExternalPotential& potential) {
  std::vector<double> energies(config.site_count() + 1);
  for (int count = 0; count <= config.site_count(); ++count) {
    energies[count] = canonical_energy(config, potential, count).value;
  }
  return energies;
}

}  // namespace

ScaledNuclearSystem scale_system(const SiteConfiguration& config,
                                 const ExternalPotential& potential,
                                 double ell) {
  validate(config);
  require_potential(config, potential);
  require_scale(ell);
  for (int k = 0; k < config.site_count(); ++k) {
    if (!(potential[k] < 0.0)) {
      throw NonAttractivePotential(
          "site " + std::to_string(k + 1) + " has potential " +
          std::to_string(potential[k]) + "; every well must be attractive");
    }
  }
  ScaledNuclearSystem system;
  system.ell = ell;
  system.positions.reserve(config.points.size());
  for (const Vec3& point : config.points) {
    system.positions.push_back(
        {ell * point[0], ell * point[1], ell * point[2]});
  }
  system.charges.reserve(potential.size());
  for (double v : potential) {
    system.charges.push_back(std::sqrt(2.0 * -v / ell));
  }
  return system;
}

double leading_order_energy(const SiteConfiguration& config,
                            const ExternalPotential& potential, double ell,
                            int electron_count) {
  validate(config);
  require_potential(config, potential);
  require_scale(ell);
  if (electron_count < 1) {
    throw CardinalityOutOfRange("electron count " +
                                std::to_string(electron_count) +
                                " must be at least one");
  }
  const int reach = std::min(electron_count, config.site_count());
  double best = canonical_energy(config, potential, 1).value;
  for (int count = 2; count <= reach; ++count) {
    best = std::min(best, canonical_energy(config, potential, count).value);
  }
  return best / ell;
}

BindingReport binding_report(const SiteConfiguration& config,
                             const ExternalPotential& potential) {
  validate(config);
  require_potential(config, potential);
  const std::vector<double> energies = ground_energies(config, potential);
  BindingReport report;
  // The empty system sits at zero; an electron binds only by beating
  // every smaller system by more than the tolerance.
  double best_smaller = 0.0;
  double best_positive_count = 0.0;
  int minimizing_count = 1;
  for (int count = 1; count <= config.site_count(); ++count) {
    BindingRow row;
    row.electron_count = count;
    row.binds = energies[count] < best_smaller - kBindingTolerance;
    best_smaller = std::min(best_smaller, energies[count]);
    if (count == 1 || energies[count] < best_positive_count) {
      best_positive_count = energies[count];
      minimizing_count = count;
    }
    row.predicted = best_positive_count;
    row.minimizing_count = minimizing_count;
    report.rows.push_back(row);
  }
  return report;
}

int lieb_max_binding(const ScaledNuclearSystem& system) {
  if (system.positions.empty() ||
      system.positions.size() != system.charges.size()) {
    throw InvalidConfiguration(
        "system needs one charge per nucleus, got " +
        std::to_string(system.charges.size()) + " charges for " +
        std::to_string(system.positions.size()) + " nuclei");
  }
  require_scale(system.ell);
  double total_charge = 0.0;
  for (double z : system.charges) {
    if (!(z > 0.0)) {
      throw InvalidConfiguration("nuclear charges must be positive, got " +
                                 std::to_string(z));
    }
    total_charge += z;
  }
  return static_cast<int>(std::floor(2.0 * total_charge)) +
         static_cast<int>(system.positions.size());
}

}  // namespace sitedft
