#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sitedft/core.hpp"
#include "sitedft/grandcanonical.hpp"

namespace sitedft {

// Requested hardness-grid window: inclusive magnitude ranges for the two
// horizontal well depths, the number of samples per axis, and the shared
// depth of the vertical wells.
struct GridSpec {
  std::pair<double, double> v1_range;
  std::pair<double, double> v3_range;
  int steps = 2;
  double fixed_vertical = 0.0;
};

// Requested random geometry search. Dimensions is 2 or 3.
struct SearchSpec {
  int sites = 6;
  long trials = 0;
  double box_halfwidth = 2.0;
  std::uint64_t seed = 0;
  int dimensions = 2;
};

// A parsed run configuration. Geometry is present when the file declares a
// [geometry] section; every other section is optional and commands check
// for what they need. Permutations and pins use zero-based site indices in
// memory even though the file numbers sites from one.
struct RunConfig {
  std::optional<SiteConfiguration> geometry;
  std::optional<ExternalPotential> potential;
  std::optional<DensityVector> density;
  std::vector<SitePermutation> symmetries;
  std::map<int, double> pins;
  std::optional<GridSpec> grid;
  std::optional<SearchSpec> search;
};

// Parses the sectioned key-value format:
//
//   [geometry]
//   diamond = 0.7 1.7 0.71414284285428498
//   exponent = 1.0
//
//   [potential]
//   v = -2.1665 -2.1665 -1.4109 -1.4109 -1.9934 -1.9934
//
//   [density]
//   rho = 0.5 0.5 0.5 0.5 0.5 0.5
//   symmetry = 2 1 4 3 5 6
//   pin = 5 -2.0
//
//   [grid]
//   v1 = 1.9 2.4
//   v3 = 1.2 1.6
//   steps = 100
//   fixed = -2.0
//
//   [search]
//   sites = 6
//   trials = 1000
//   halfwidth = 2.0
//   seed = 1
//   dimensions = 2
//
// Geometry may instead list explicit coordinates, one "point = x y z" line
// per site. Blank lines and lines starting with '#' are ignored. Unknown
// sections or keys, duplicate single-valued keys, and malformed values all
// raise ConfigError with the offending line number. The path parameter is
// only used for error messages.
RunConfig parse_run_config(const std::string& path,
                           const std::string& content);

// read_file followed by parse_run_config.
RunConfig load_run_config(const std::string& path);

}  // namespace sitedft
