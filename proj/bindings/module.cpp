// Python bindings for the site model. Thin translation layer: subsets
// cross the boundary as sorted tuples of zero-based site indices and
// report structs become dicts, so the python surface needs no wrapper
// classes beyond SiteConfiguration itself.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <vector>

#include "sitedft/asymptotics.hpp"
#include "sitedft/canonical.hpp"
#include "sitedft/core.hpp"
#include "sitedft/errors.hpp"
#include "sitedft/grandcanonical.hpp"
#include "sitedft/search.hpp"
#include "sitedft/verification.hpp"

namespace py = pybind11;

namespace {

using namespace sitedft;

py::tuple subset_tuple(const Occupation& occ) {
  std::vector<int> sites;
  for (int site = 0; site < kMaxSites; ++site) {
    if (occ.contains(site)) {
      sites.push_back(site);
    }
  }
  py::tuple result(sites.size());
  for (std::size_t index = 0; index < sites.size(); ++index) {
    result[index] = sites[index];
  }
  return result;
}

py::list subset_list(const std::vector<Occupation>& subsets) {
  py::list result;
  for (const Occupation& occ : subsets) {
    result.append(subset_tuple(occ));
  }
  return result;
}

py::dict ensemble_dict(const EnsembleState& ensemble) {
  py::dict result;
  for (const auto& [mask, probability] : ensemble.probs) {
    result[subset_tuple(Occupation(mask))] = probability;
  }
  return result;
}

py::dict functional_dict(const FunctionalValue& functional) {
  py::dict result;
  result["value"] = functional.value;
  result["ensemble"] = ensemble_dict(functional.ensemble);
  return result;
}

py::dict hardness_dict(const HardnessResult& result) {
  py::dict out;
  out["potential"] = result.potential;
  out["cardinality"] = result.cardinality;
  out["eta"] = result.eta;
  out["certified"] = result.certified;
  out["evaluations"] = result.evaluations;
  out["energies"] = result.profile.energies;
  out["violations"] = result.profile.violations;
  return out;
}

py::dict suite_dict(const SuiteReport& report) {
  py::dict out;
  out["name"] = report.name;
  out["trials"] = report.trials;
  out["failures"] = report.failures;
  out["worst"] = report.worst;
  out["tolerance"] = report.tolerance;
  out["passed"] = report.passed();
  return out;
}

SiteConfiguration make_configuration(const std::vector<Vec3>& points,
                                     double exponent) {
  SiteConfiguration config;
  config.points = points;
  config.exponent_s = exponent;
  validate(config);
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Classical electrons on finite site geometries: ground-state "
      "profiles, density functionals, their ensemble relaxation, and the "
      "dissociation limit.";

  py::register_exception<Error>(m, "Error");

  py::class_<SiteConfiguration>(m, "SiteConfiguration")
      .def(py::init(&make_configuration), py::arg("points"),
           py::arg("exponent") = 1.0,
           "Sites given as (x, y, z) triples with the interaction "
           "kernel |r|^(-exponent).")
      .def_readonly("points", &SiteConfiguration::points)
      .def_readonly("exponent", &SiteConfiguration::exponent_s)
      .def_property_readonly("site_count", &SiteConfiguration::site_count)
      .def("__len__", &SiteConfiguration::site_count)
      .def("__repr__", [](const SiteConfiguration& config) {
        return "SiteConfiguration(" + std::to_string(config.site_count()) +
               " sites, exponent " + std::to_string(config.exponent_s) +
               ")";
      });

  m.def("diamond", &diamond_configuration, py::arg("a"), py::arg("b"),
        py::arg("h"),
        "Six sites: x-axis pairs at +-a and +-b, y-axis pair at +-h.");

  m.def(
      "subset_energy",
      [](const SiteConfiguration& config, const std::vector<int>& sites) {
        std::uint32_t mask = 0;
        for (const int site : sites) {
          if (site < 0 || site >= config.site_count()) {
            throw InvalidConfiguration("site index out of range");
          }
          mask |= 1u << site;
        }
        return configuration_energy(config, Occupation(mask));
      },
      py::arg("config"), py::arg("sites"),
      "Interaction energy of one subset, summed over unordered pairs.");

  m.def(
      "ground_energy",
      [](const SiteConfiguration& config, const ExternalPotential& v,
         int electrons) {
        const CanonicalEnergy result = canonical_energy(config, v, electrons);
        py::dict out;
        out["value"] = result.value;
        out["minimizers"] = subset_list(result.minimizers);
        return out;
      },
      py::arg("config"), py::arg("v"), py::arg("electrons"),
      "Exhaustive minimum of the subset energy plus external terms at a "
      "fixed electron count, with every minimizer.");

  m.def(
      "energy_profile",
      [](const SiteConfiguration& config, const ExternalPotential& v) {
        const EnergyProfile profile = energy_profile(config, v);
        py::dict out;
        out["energies"] = profile.energies;
        py::list minimizers;
        for (const auto& level : profile.minimizers) {
          minimizers.append(subset_list(level));
        }
        out["minimizers"] = minimizers;
        out["envelope"] = profile.envelope;
        out["violations"] = profile.violations;
        return out;
      },
      py::arg("config"), py::arg("v"),
      "Ground-state energies for every electron count, their lower "
      "convex envelope, and the counts violating midpoint convexity.");

  m.def(
      "functional",
      [](const SiteConfiguration& config, const DensityVector& rho,
         int electrons) {
        return functional_dict(canonical_functional(config, rho, electrons));
      },
      py::arg("config"), py::arg("rho"), py::arg("electrons"),
      "Least mean interaction energy over fixed-count ensembles with the "
      "given site marginals.");

  m.def(
      "ensemble_functional",
      [](const SiteConfiguration& config, const DensityVector& rho) {
        return functional_dict(gc_functional(config, rho));
      },
      py::arg("config"), py::arg("rho"),
      "Least mean interaction energy over ensembles of arbitrary "
      "cardinality with the given site marginals.");

  m.def("ensemble_energy", &gc_energy, py::arg("config"), py::arg("v"),
        py::arg("mean_count"),
        "Least mean energy over normalized ensembles with the given mean "
        "electron count; the lower convex envelope of the fixed-count "
        "energies at integer means.");

  m.def(
      "dual_potential",
      [](const SiteConfiguration& config, const DensityVector& rho,
         const std::vector<SitePermutation>& symmetry,
         const std::map<int, double>& pinned) {
        const DualCertificate certificate =
            dual_potential(config, rho, symmetry, pinned);
        py::dict out;
        out["potential"] = certificate.potential;
        out["ground_energy"] = certificate.gc_ground_energy;
        out["gap_check"] = certificate.gap_check;
        out["active_subsets"] = subset_list(certificate.active_subsets);
        out["face_dimension"] = certificate.face_dimension;
        return out;
      },
      py::arg("config"), py::arg("rho"),
      py::arg("symmetry") = std::vector<SitePermutation>{},
      py::arg("pinned") = std::map<int, double>{},
      "Potential certifying the ensemble functional value through strong "
      "duality, optionally averaged over symmetries and pinned.");

  m.def(
      "hardness",
      [](const SiteConfiguration& config, const ExternalPotential& v,
         int electrons) { return hardness_dict(hardness(config, v, electrons)); },
      py::arg("config"), py::arg("v"), py::arg("electrons") = 3,
      "Convexity defect at the given count: negative eta certifies a "
      "violation.");

  m.def(
      "minimize_hardness",
      [](const SiteConfiguration& config, const ExternalPotential& start,
         int electrons, const std::vector<int>& frozen,
         long max_evaluations) {
        return hardness_dict(minimize_hardness(config, start, electrons,
                                               frozen, max_evaluations));
      },
      py::arg("config"), py::arg("start"), py::arg("electrons") = 3,
      py::arg("frozen") = std::vector<int>{},
      py::arg("max_evaluations") = kMaxHardnessEvaluations,
      "Deterministic pattern search decreasing the convexity defect over "
      "the unfrozen potential coordinates.");

  m.def(
      "certify",
      [](const SiteConfiguration& config, const ExternalPotential& v,
         int electrons) {
        const CertificationReport report =
            certify_counterexample(config, v, electrons);
        py::dict out;
        out["electrons"] = report.cardinality;
        out["energy_below"] = report.below.value;
        out["energy_at"] = report.at.value;
        out["energy_above"] = report.above.value;
        out["midpoint"] = report.midpoint;
        out["margin"] = report.margin;
        out["certified"] = report.passed;
        out["minimizers"] = subset_list(report.at.minimizers);
        return out;
      },
      py::arg("config"), py::arg("v"), py::arg("electrons") = 3,
      "Exhaustive check that the energy at the given count sits strictly "
      "above the midpoint of its neighbors.");

  m.def(
      "gap",
      [](const SiteConfiguration& config, const DensityVector& rho,
         int electrons) {
        const GapSample sample = gap_at_density(config, rho, electrons);
        py::dict out;
        out["canonical"] = sample.f_canonical;
        out["ensemble"] = sample.f_gc;
        out["gap"] = sample.gap;
        out["relative_gap"] = sample.relative_gap;
        return out;
      },
      py::arg("config"), py::arg("rho"), py::arg("electrons"),
      "Fixed-count functional minus its ensemble relaxation at one "
      "density.");

  m.def(
      "random_search",
      [](int sites, long trials, double halfwidth, std::uint64_t seed,
         const std::optional<DensityVector>& rho, int jobs,
         bool three_dimensional) {
        py::list out;
        for (const GapSample& sample :
             random_geometry_search(sites, trials, halfwidth, seed, rho,
                                    jobs, three_dimensional)) {
          py::dict entry;
          entry["points"] = sample.config.points;
          entry["rho"] = sample.rho;
          entry["canonical"] = sample.f_canonical;
          entry["ensemble"] = sample.f_gc;
          entry["gap"] = sample.gap;
          entry["relative_gap"] = sample.relative_gap;
          out.append(entry);
        }
        return out;
      },
      py::arg("sites"), py::arg("trials"), py::arg("halfwidth") = 2.0,
      py::arg("seed") = 0, py::arg("rho") = std::nullopt,
      py::arg("jobs") = 1, py::arg("three_dimensional") = false,
      "Uniform random geometries keeping the samples whose functional "
      "gap is strictly positive, sorted by decreasing gap.");

  m.def(
      "dissociation",
      [](const SiteConfiguration& config, const ExternalPotential& v,
         double ell) {
        const ScaledNuclearSystem system = scale_system(config, v, ell);
        const BindingReport report = binding_report(config, v);
        py::dict out;
        out["ell"] = system.ell;
        out["positions"] = system.positions;
        out["charges"] = system.charges;
        out["max_binding"] = lieb_max_binding(system);
        py::list rows;
        for (const BindingRow& row : report.rows) {
          py::dict entry;
          entry["electrons"] = row.electron_count;
          entry["scaled_energy"] = row.predicted;
          entry["minimizing_count"] = row.minimizing_count;
          entry["binds"] = row.binds;
          rows.append(entry);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("config"), py::arg("v"), py::arg("ell") = 1e4,
      "Stretched-geometry nuclear charges, the binding profile, and the "
      "charge-based bound on how many electrons can bind.");

  m.def(
      "run_suite",
      [](const std::string& name, long trials, std::uint64_t seed,
         int jobs) {
        if (name == "k4-equality") {
          return suite_dict(run_k4_equality_suite(trials, seed, jobs));
        }
        if (name == "exchange-identity") {
          return suite_dict(run_exchange_identity_suite(trials, seed));
        }
        if (name == "collinear-equality") {
          return suite_dict(run_collinear_equality_suite(trials, seed, jobs));
        }
        if (name == "lp-oracle") {
          return suite_dict(run_lp_oracle_suite(trials, seed, jobs));
        }
        if (name == "envelope-consistency") {
          return suite_dict(
              run_envelope_consistency_suite(trials, seed, jobs));
        }
        throw BadRange("unknown suite '" + name + "'");
      },
      py::arg("name"), py::arg("trials"),
      py::arg("seed") = kDefaultVerificationSeed, py::arg("jobs") = 1,
      "Run one randomized self-check suite: k4-equality, "
      "exchange-identity, collinear-equality, lp-oracle, or "
      "envelope-consistency.");

  m.attr("MAX_SITES") = kMaxSites;
  m.attr("CERTIFICATION_MARGIN") = kCertificationMargin;
  m.attr("DEFAULT_VERIFICATION_SEED") = kDefaultVerificationSeed;
}
