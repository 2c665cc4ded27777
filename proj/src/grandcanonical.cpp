#include "sitedft/grandcanonical.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>

#include "sitedft/errors.hpp"
#include "sitedft/lp.hpp"

namespace sitedft {

namespace {

// Slack applied to the [0, 1] bounds of a requested density.
constexpr double kDensityTolerance = 1e-9;

// A permutation counts as a symmetry when interactions and density are
// preserved within this.
constexpr double kSymmetryTolerance = 1e-9;

// Pivot threshold of the rank computation on active-constraint rows.
constexpr double kRankThreshold = 1e-9;

void require_potential(const SiteConfiguration& config,
                       const ExternalPotential& potential) {
  if (static_cast<int>(potential.size()) != config.site_count()) {
    throw InvalidConfiguration(
        "potential has " + std::to_string(potential.size()) +
        " entries for " + std::to_string(config.site_count()) + " sites");
  }
}

void require_density_bounds(const DensityVector& rho, int site_count) {
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

// The marginal-constrained program over all subsets: one normalization
// row, then one row per site.
LinearProgram marginal_program(const std::vector<Occupation>& columns,
                               const std::vector<double>& interaction,
                               const DensityVector& rho) {
  const int sites = static_cast<int>(rho.size());
  const std::size_t n = columns.size();
  LinearProgram lp;
  lp.objective.resize(n);
  lp.constraint_matrix.assign(sites + 1, std::vector<double>(n, 0.0));
  lp.rhs.assign(sites + 1, 0.0);
  lp.rhs[0] = 1.0;
  for (int k = 0; k < sites; ++k) lp.rhs[k + 1] = rho[k];
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective[j] = interaction[columns[j].mask];
    lp.constraint_matrix[0][j] = 1.0;
    for (int k = 0; k < sites; ++k) {
      if (columns[j].contains(k)) lp.constraint_matrix[k + 1][j] = 1.0;
    }
  }
  return lp;
}

LpSolution solve_marginal_program(const LinearProgram& lp) {
  const LpSolution solution = solve_lp(lp);
  if (solution.status == LpStatus::Infeasible) {
    throw InfeasibleDensity(
        "no ensemble attains the requested site occupations");
  }
  if (solution.status != LpStatus::Optimal) {
    throw NumericalBreakdown("bounded marginal program reported unbounded");
  }
  return solution;
}

void require_symmetry(const std::vector<std::vector<double>>& interactions,
                      const DensityVector& rho, const SitePermutation& perm) {
  const int sites = static_cast<int>(rho.size());
  if (static_cast<int>(perm.size()) != sites) {
    throw InvalidConfiguration("permutation has " +
                               std::to_string(perm.size()) +
                               " entries for " + std::to_string(sites) +
                               " sites");
  }
  std::vector<bool> seen(sites, false);
  for (int image : perm) {
    if (image < 0 || image >= sites || seen[image]) {
      throw InvalidConfiguration("site images are not a permutation");
    }
    seen[image] = true;
  }
  for (int j = 0; j < sites; ++j) {
    for (int k = j + 1; k < sites; ++k) {
      if (std::abs(interactions[perm[j]][perm[k]] - interactions[j][k]) >
          kSymmetryTolerance) {
        throw InvalidConfiguration(
            "permutation does not preserve the interactions");
      }
    }
    if (std::abs(rho[perm[j]] - rho[j]) > kSymmetryTolerance) {
      throw InvalidConfiguration("permutation does not preserve the density");
    }
  }
}

// The group generated by the validated permutations, identity included.
// Capped because user input could generate the whole symmetric group.
std::set<SitePermutation> generated_group(
    const std::vector<SitePermutation>& generators, int sites) {
  constexpr std::size_t kGroupCap = 10000;
  SitePermutation identity(sites);
  for (int k = 0; k < sites; ++k) identity[k] = k;
  std::set<SitePermutation> group{identity};
  std::vector<SitePermutation> queue{identity};
  while (!queue.empty()) {
    const SitePermutation current = std::move(queue.back());
    queue.pop_back();
    for (const SitePermutation& gen : generators) {
      SitePermutation next(sites);
      for (int k = 0; k < sites; ++k) next[k] = gen[current[k]];
      if (group.insert(next).second) {
        if (group.size() > kGroupCap) {
          throw InvalidConfiguration("symmetry group exceeds " +
                                     std::to_string(kGroupCap) +
                                     " elements");
        }
        queue.push_back(next);
      }
    }
  }
  return group;
}

// Representative site of each symmetry equivalence class, by union-find
// over every generator's orbits.
std::vector<int> class_representatives(
    const std::vector<SitePermutation>& generators, int sites) {
  std::vector<int> parent(sites);
  for (int k = 0; k < sites; ++k) parent[k] = k;
  const auto find = [&parent](int k) {
    while (parent[k] != k) {
      parent[k] = parent[parent[k]];
      k = parent[k];
    }
    return k;
  };
  for (const SitePermutation& gen : generators) {
    for (int k = 0; k < sites; ++k) {
      const int a = find(k);
      const int b = find(gen[k]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  for (int k = 0; k < sites; ++k) parent[k] = find(k);
  return parent;
}

int matrix_rank(std::vector<std::vector<double>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  int rank = 0;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows.size(); ++col) {
    std::size_t best = lead;
    for (std::size_t r = lead + 1; r < rows.size(); ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[best][col])) best = r;
    }
    if (std::abs(rows[best][col]) <= kRankThreshold) continue;
    std::swap(rows[lead], rows[best]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == lead) continue;
      const double factor = rows[r][col] / rows[lead][col];
      for (std::size_t c = col; c < cols; ++c) {
        rows[r][c] -= factor * rows[lead][c];
      }
    }
    ++lead;
    ++rank;
  }
  return rank;
}

DualCertificate finish_certificate(const std::vector<Occupation>& columns,
                                   const std::vector<double>& interaction,
                                   const DensityVector& rho, double functional,
                                   double ground, ExternalPotential v) {
  const int sites = static_cast<int>(rho.size());
  DualCertificate certificate;
  certificate.gc_ground_energy = ground;
  double coupling = 0.0;
  for (int k = 0; k < sites; ++k) coupling += v[k] * rho[k];
  certificate.gap_check = std::abs(functional - (ground - coupling));
  for (const Occupation& occ : columns) {
    const double slack =
        interaction[occ.mask] + potential_sum(v, occ) - ground;
    if (std::abs(slack) <= kDualSlackTolerance) {
      certificate.active_subsets.push_back(occ);
    }
  }
  std::vector<std::vector<double>> active_rows;
  active_rows.reserve(certificate.active_subsets.size());
  for (const Occupation& occ : certificate.active_subsets) {
    std::vector<double> row(sites + 1, 0.0);
    row[0] = 1.0;
    for (int k = 0; k < sites; ++k) {
      if (occ.contains(k)) row[k + 1] = 1.0;
    }
    active_rows.push_back(std::move(row));
  }
  certificate.face_dimension = sites + 1 - matrix_rank(std::move(active_rows));
  certificate.potential = std::move(v);
  return certificate;
}

// Selects a potential from the optimal dual face under pins and symmetry
// by three solves: the attainable ground-energy extremes, then a point
// at their midpoint. Works on w = -v; every free variable is split into
// a positive pair.
struct FaceSelection {
  double ground = 0.0;
  ExternalPotential potential;
};

FaceSelection select_from_dual_face(const std::vector<Occupation>& columns,
                                    const std::vector<double>& interaction,
                                    const DensityVector& rho,
                                    double functional,
                                    const std::vector<SitePermutation>& symmetry,
                                    const std::map<int, double>& pinned) {
  const int sites = static_cast<int>(rho.size());
  const std::size_t subsets = columns.size();
  const auto mu_plus = std::size_t{0};
  const auto w_plus = [](int site) {
    return std::size_t{2} + 2 * static_cast<std::size_t>(site);
  };
  const std::size_t slack0 = 2 + 2 * static_cast<std::size_t>(sites);
  const std::size_t n = slack0 + subsets;

  LinearProgram lp;
  lp.objective.assign(n, 0.0);
  lp.rhs.clear();
  const auto add_row = [&lp, n](double rhs) -> std::vector<double>& {
    lp.constraint_matrix.emplace_back(n, 0.0);
    lp.rhs.push_back(rhs);
    return lp.constraint_matrix.back();
  };
  // mu + sum_{i in I} w_i + s_I = c_I for every subset.
  for (std::size_t j = 0; j < subsets; ++j) {
    std::vector<double>& row = add_row(interaction[columns[j].mask]);
    row[mu_plus] = 1.0;
    row[mu_plus + 1] = -1.0;
    for (int k = 0; k < sites; ++k) {
      if (columns[j].contains(k)) {
        row[w_plus(k)] = 1.0;
        row[w_plus(k) + 1] = -1.0;
      }
    }
    row[slack0 + j] = 1.0;
  }
  // Optimality: mu + sum_k rho_k w_k = F.
  {
    std::vector<double>& row = add_row(functional);
    row[mu_plus] = 1.0;
    row[mu_plus + 1] = -1.0;
    for (int k = 0; k < sites; ++k) {
      row[w_plus(k)] = rho[k];
      row[w_plus(k) + 1] = -rho[k];
    }
  }
  // Pins fix w_k = -v_k.
  for (const auto& [site, value] : pinned) {
    std::vector<double>& row = add_row(-value);
    row[w_plus(site)] = 1.0;
    row[w_plus(site) + 1] = -1.0;
  }
  // Symmetry ties every site to its class representative.
  const std::vector<int> rep = class_representatives(symmetry, sites);
  for (int k = 0; k < sites; ++k) {
    if (rep[k] == k) continue;
    std::vector<double>& row = add_row(0.0);
    row[w_plus(k)] = 1.0;
    row[w_plus(k) + 1] = -1.0;
    row[w_plus(rep[k])] = -1.0;
    row[w_plus(rep[k]) + 1] = 1.0;
  }

  const auto solve_for = [&lp](double mu_cost) {
    lp.objective[0] = mu_cost;
    lp.objective[1] = -mu_cost;
    const LpSolution solution = solve_lp(lp);
    if (solution.status == LpStatus::Infeasible) {
      throw InvalidConfiguration(
          "pins exclude every optimal dual potential");
    }
    if (solution.status == LpStatus::Unbounded) {
      throw InvalidConfiguration(
          "pinned dual face leaves the ground energy unbounded");
    }
    return solution;
  };
  const double ground_low = solve_for(1.0).objective_value;
  const double ground_high = -solve_for(-1.0).objective_value;
  const double ground = 0.5 * (ground_low + ground_high);

  // Fix the ground energy at the midpoint and take any vertex there.
  {
    std::vector<double>& row = add_row(ground);
    row[mu_plus] = 1.0;
    row[mu_plus + 1] = -1.0;
  }
  const LpSolution anchored = solve_for(0.0);
  FaceSelection selection;
  selection.ground = ground;
  selection.potential.resize(sites);
  for (int k = 0; k < sites; ++k) {
    selection.potential[k] =
        -(anchored.primal[w_plus(k)] - anchored.primal[w_plus(k) + 1]);
  }
  return selection;
}

}  // namespace

FunctionalValue gc_functional(const SiteConfiguration& config,
                              const DensityVector& rho) {
  validate(config);
  const int sites = config.site_count();
  require_density_bounds(rho, sites);
  const std::vector<double> interaction = all_subset_energies(config);
  const std::vector<Occupation> columns = enumerate_occupations(sites);
  const LpSolution solution =
      solve_marginal_program(marginal_program(columns, interaction, rho));
  FunctionalValue result;
  result.value = solution.objective_value;
  result.ensemble = make_ensemble(columns, solution.primal);
  return result;
}

double gc_energy(const SiteConfiguration& config,
                 const ExternalPotential& potential, double mean_count) {
  validate(config);
  require_potential(config, potential);
  const int sites = config.site_count();
  if (!(mean_count >= 0.0) || mean_count > sites) {
    throw MassOutOfRange("mean electron count " + std::to_string(mean_count) +
                         " lies outside [0, " + std::to_string(sites) + "]");
  }
  const std::vector<double> interaction = all_subset_energies(config);
  const std::vector<Occupation> columns = enumerate_occupations(sites);
  const std::size_t n = columns.size();
  LinearProgram lp;
  lp.objective.resize(n);
  lp.constraint_matrix.assign(2, std::vector<double>(n, 0.0));
  lp.rhs = {1.0, mean_count};
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective[j] =
        interaction[columns[j].mask] + potential_sum(potential, columns[j]);
    lp.constraint_matrix[0][j] = 1.0;
    lp.constraint_matrix[1][j] = columns[j].cardinality();
  }
  const LpSolution solution = solve_lp(lp);
  if (solution.status != LpStatus::Optimal) {
    throw NumericalBreakdown(
        "bounded mean-count program failed to reach an optimum");
  }
  return solution.objective_value;
}

DualCertificate dual_potential(const SiteConfiguration& config,
                               const DensityVector& rho,
                               const std::vector<SitePermutation>& symmetry,
                               const std::map<int, double>& pinned) {
  validate(config);
  const int sites = config.site_count();
  require_density_bounds(rho, sites);
  const std::vector<std::vector<double>> interactions =
      pair_energy_matrix(config);
  for (const SitePermutation& perm : symmetry) {
    require_symmetry(interactions, rho, perm);
  }
  for (const auto& [site, value] : pinned) {
    if (site < 0 || site >= sites) {
      throw InvalidConfiguration("pinned site " + std::to_string(site + 1) +
                                 " does not exist");
    }
    if (!std::isfinite(value)) {
      throw InvalidConfiguration("pinned potential value is not finite");
    }
  }

  const std::vector<double> interaction = all_subset_energies(config);
  const std::vector<Occupation> columns = enumerate_occupations(sites);
  const LpSolution solution =
      solve_marginal_program(marginal_program(columns, interaction, rho));
  const double functional = solution.objective_value;
  double ground = solution.duals[0];
  ExternalPotential v(sites);
  for (int k = 0; k < sites; ++k) v[k] = -solution.duals[k + 1];

  if (!pinned.empty()) {
    FaceSelection selection = select_from_dual_face(
        columns, interaction, rho, functional, symmetry, pinned);
    ground = selection.ground;
    v = std::move(selection.potential);
  } else if (!symmetry.empty()) {
    const std::set<SitePermutation> group = generated_group(symmetry, sites);
    ExternalPotential averaged(sites, 0.0);
    for (const SitePermutation& perm : group) {
      for (int k = 0; k < sites; ++k) averaged[k] += v[perm[k]];
    }
    for (double& entry : averaged) entry /= static_cast<double>(group.size());
    v = std::move(averaged);
  }
  return finish_certificate(columns, interaction, rho, functional, ground,
                            std::move(v));
}

}  // namespace sitedft
