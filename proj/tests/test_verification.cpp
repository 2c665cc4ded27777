#include <string>

#include "doctest.h"
#include "sitedft/verification.hpp"

namespace {

using namespace sitedft;

}  // namespace

TEST_SUITE("verification") {

TEST_CASE("the four-site equality suite passes") {
  const SuiteReport report = run_k4_equality_suite(30, 0x11d00d01u);
  CHECK(report.name == "k4-equality");
  CHECK(report.trials == 30);
  CHECK(report.failures == 0);
  CHECK(report.passed());
  CHECK(report.worst <= report.tolerance);
  CHECK(report.tolerance == 1e-8);
}

TEST_CASE("the exchange identity suite passes") {
  const SuiteReport report = run_exchange_identity_suite(50, 0x11d00d02u);
  CHECK(report.name == "exchange-identity");
  CHECK(report.failures == 0);
  CHECK(report.worst <= 1e-12);
}

TEST_CASE("the collinear equality suite passes") {
  const SuiteReport report = run_collinear_equality_suite(20, 0x11d00d03u);
  CHECK(report.name == "collinear-equality");
  CHECK(report.failures == 0);
  CHECK(report.worst <= report.tolerance);
}

TEST_CASE("the LP oracle suite passes") {
  const SuiteReport report = run_lp_oracle_suite(40, 0x11d00d04u);
  CHECK(report.name == "lp-oracle");
  CHECK(report.failures == 0);
  CHECK(report.worst <= report.tolerance);
}

TEST_CASE("the envelope consistency suite passes") {
  const SuiteReport report = run_envelope_consistency_suite(10, 0x11d00d05u);
  CHECK(report.name == "envelope-consistency");
  CHECK(report.failures == 0);
  CHECK(report.worst <= report.tolerance);
}

TEST_CASE("suite reports are deterministic and independent of jobs") {
  const SuiteReport serial = run_k4_equality_suite(15, 0x7e57ab1eu, 1);
  const SuiteReport threaded = run_k4_equality_suite(15, 0x7e57ab1eu, 3);
  CHECK(serial.worst == threaded.worst);
  CHECK(serial.failures == threaded.failures);
  const SuiteReport oracle_a = run_lp_oracle_suite(12, 0x7e57ab1fu, 1);
  const SuiteReport oracle_b = run_lp_oracle_suite(12, 0x7e57ab1fu, 2);
  CHECK(oracle_a.worst == oracle_b.worst);
}

TEST_CASE("zero trials pass vacuously") {
  const SuiteReport report = run_collinear_equality_suite(0, 1u);
  CHECK(report.trials == 0);
  CHECK(report.failures == 0);
  CHECK(report.worst == 0.0);
  CHECK(report.passed());
}

}  // TEST_SUITE
