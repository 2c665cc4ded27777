#pragma once

#include <cstdint>
#include <string>

namespace sitedft {

// Seed the randomized verification suites run under when the caller
// does not pick one.
inline constexpr std::uint64_t kDefaultVerificationSeed = 0x5eedc0deu;

// Outcome of one randomized property suite.
struct SuiteReport {
  std::string name;
  long trials = 0;
  long failures = 0;
  // Largest observed discrepancy across all trials.
  double worst = 0.0;
  // A trial fails when its discrepancy exceeds this.
  double tolerance = 0.0;

  bool passed() const { return failures == 0; }
};

// Fixed-count and free-cardinality functionals agree on random
// four-site configurations with random integer-mass densities;
// discrepancy |F - F_GC|, tolerance 1e-8.
SuiteReport run_k4_equality_suite(long trials,
                                  std::uint64_t seed = kDefaultVerificationSeed,
                                  int jobs = 1);

// Interaction energies of four random sites satisfy the exchange
// identity c_123 + c_124 - c_12 - c_1234 = -1/|R_3 - R_4|;
// discrepancy is the residual, tolerance 1e-12.
SuiteReport run_exchange_identity_suite(
    long trials, std::uint64_t seed = kDefaultVerificationSeed);

// The functionals agree on random collinear configurations of up to
// eight sites with integer-mass densities; discrepancy |F - F_GC|,
// tolerance 1e-8.
SuiteReport run_collinear_equality_suite(
    long trials, std::uint64_t seed = kDefaultVerificationSeed, int jobs = 1);

// The simplex solver matches brute-force vertex enumeration on random
// bounded standard-form programs (n <= 16, m <= 8), and its primal and
// dual objectives coincide; discrepancy is the larger of the objective
// difference and the duality gap, tolerance 1e-8.
SuiteReport run_lp_oracle_suite(long trials,
                                std::uint64_t seed = kDefaultVerificationSeed,
                                int jobs = 1);

// The free-cardinality ground energy at every integer mean count
// equals the lower convex envelope of the per-count energies, on random
// configurations and potentials; discrepancy is the largest difference,
// tolerance 1e-8.
SuiteReport run_envelope_consistency_suite(
    long trials, std::uint64_t seed = kDefaultVerificationSeed, int jobs = 1);

}  // namespace sitedft
