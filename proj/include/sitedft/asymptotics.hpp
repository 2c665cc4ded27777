#pragma once

#include <vector>

#include "sitedft/core.hpp"

namespace sitedft {

// An electron count binds only when it lowers the classical energy by
// more than this; exact ties count as escaping.
inline constexpr double kBindingTolerance = 1e-9;

// Nuclear realization of a site potential at scale ell: nuclei at
// ell * R_j with fractional charges z_j = sqrt(2 |v_j| / ell), chosen so
// the hydrogenic ground energy -z_j^2 / 2 of each isolated well equals
// v_j / ell.
struct ScaledNuclearSystem {
  double ell = 1.0;
  std::vector<Vec3> positions;
  std::vector<double> charges;
};

// Leading-order prediction for one electron count.
struct BindingRow {
  int electron_count = 0;
  // min over 1 <= n <= min(N, K) of the classical ground energy; the
  // predicted quantum energy is this over ell.
  double predicted = 0.0;
  // Smallest count attaining the minimum.
  int minimizing_count = 0;
  // The count lowers the classical energy below every smaller count
  // (the empty system included), so all N electrons stay bound.
  bool binds = false;
};

// Rows for N = 1 .. K. predicted is non-increasing down the rows, and
// binds holds exactly where it strictly decreases.
struct BindingReport {
  std::vector<BindingRow> rows;
};

// Builds the nuclear system realizing the potential at scale ell.
// Requires ell > 0 and every v_k < 0; throws NonAttractivePotential on
// a non-negative entry. Round trip: v_k = -ell * z_k^2 / 2.
ScaledNuclearSystem scale_system(const SiteConfiguration& config,
                                 const ExternalPotential& potential,
                                 double ell);

// Predicted ground energy of N electrons at scale ell, to leading
// order: min over 1 <= n <= min(N, K) of the classical ground energy,
// divided by ell. Saturates beyond N = K. Requires N >= 1 and ell > 0.
double leading_order_energy(const SiteConfiguration& config,
                            const ExternalPotential& potential, double ell,
                            int electron_count);

// Binding prediction for every count N = 1 .. K.
BindingReport binding_report(const SiteConfiguration& config,
                             const ExternalPotential& potential);

// Upper bound floor(2 sum_j z_j) + M on the number of electrons M
// nuclei of charges z_j can bind.
int lieb_max_binding(const ScaledNuclearSystem& system);

}  // namespace sitedft
