// Error types thrown by the sitedft library. Every failure that is the
// caller's responsibility derives from Error; numerical failures inside
// otherwise valid computations use NumericalBreakdown.

#pragma once

#include <stdexcept>
#include <string>

namespace sitedft {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A SiteConfiguration invariant fails (site count, exponent, finiteness),
// or an operation receives inputs whose shapes do not match.
class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

// Two sites are closer than the minimum separation.
class CoincidentSites : public Error {
 public:
  using Error::Error;
};

// An electron count or subset cardinality is outside its admissible range.
class CardinalityOutOfRange : public Error {
 public:
  using Error::Error;
};

// Ensemble probabilities do not sum to one within tolerance, or a
// probability lies outside [0, 1].
class UnnormalizedEnsemble : public Error {
 public:
  using Error::Error;
};

// A density vector violates 0 <= rho_k <= 1 or has the wrong mass.
class InfeasibleDensity : public Error {
 public:
  using Error::Error;
};

// A mean particle number lies outside [0, K].
class MassOutOfRange : public Error {
 public:
  using Error::Error;
};

// A pivot below the hard tolerance would be required, or a solver
// invariant failed in floating point.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

// A brute-force verification guard was exceeded.
class ProblemTooLarge : public Error {
 public:
  using Error::Error;
};

// A grid specification is invalid (empty range, too few steps, or a
// geometry the grid axes do not apply to).
class BadRange : public Error {
 public:
  using Error::Error;
};

// A parametrized geometry degenerates to coincident sites.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// A potential that must be attractive everywhere has a nonnegative entry.
class NonAttractivePotential : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A run configuration file failed to parse or validate. The message is
// "<path>:<line>: <detail>" with a 1-based line number; line 0 marks a
// failure of the file as a whole, such as a missing section.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, int line, const std::string& detail)
      : Error(path + ":" + std::to_string(line) + ": " + detail), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace sitedft
