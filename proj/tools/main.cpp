// Command line front end. Subcommands cover the ground-state energy
// table, dual potentials, convexity certification, the hardness grid,
// random geometry search, the dissociation profile, and the self-check
// suites. All machine output is byte-stable across runs: JSON documents
// are single lines with 12 significant digits, text tables use 4
// decimals, and --out targets are written atomically.

#include <clocale>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sitedft/asymptotics.hpp"
#include "sitedft/canonical.hpp"
#include "sitedft/config_file.hpp"
#include "sitedft/core.hpp"
#include "sitedft/errors.hpp"
#include "sitedft/grandcanonical.hpp"
#include "sitedft/search.hpp"
#include "sitedft/text_io.hpp"
#include "sitedft/verification.hpp"

namespace {

using namespace sitedft;

constexpr int kExitSuccess = 0;
constexpr int kExitNotViolated = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<double> exponent;
  std::optional<std::uint64_t> seed;
  bool symmetrize = false;
  int jobs = 1;
  int electrons = 3;
  double ell = 1e4;
};

const SiteConfiguration& need_geometry(const RunConfig& run,
                                       const std::string& path) {
  if (!run.geometry.has_value()) {
    throw ConfigError(path, 0, "missing [geometry] section");
  }
  return *run.geometry;
}

const ExternalPotential& need_potential(const RunConfig& run,
                                        const std::string& path) {
  if (!run.potential.has_value()) {
    throw ConfigError(path, 0, "missing [potential] section");
  }
  return *run.potential;
}

const DensityVector& need_density(const RunConfig& run,
                                  const std::string& path) {
  if (!run.density.has_value()) {
    throw ConfigError(path, 0, "missing [density] section");
  }
  return *run.density;
}

SiteConfiguration resolve_geometry(const RunConfig& run,
                                   const CommonOptions& options) {
  SiteConfiguration geometry = need_geometry(run, options.config_path);
  if (options.exponent.has_value()) {
    geometry.exponent_s = *options.exponent;
  }
  return geometry;
}

// The machine artifact goes to --out when given, to stdout otherwise.
void emit_artifact(const CommonOptions& options, const std::string& text) {
  if (options.out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file_atomic(options.out_path, text);
  }
}

std::vector<int> one_based_sites(const Occupation& occ, int site_count) {
  std::vector<int> sites;
  for (int k = 0; k < site_count; ++k) {
    if (occ.contains(k)) {
      sites.push_back(k + 1);
    }
  }
  return sites;
}

std::string subset_text(const Occupation& occ, int site_count) {
  std::string out = "{";
  bool first = true;
  for (const int site : one_based_sites(occ, site_count)) {
    if (!first) {
      out += ',';
    }
    out += std::to_string(site);
    first = false;
  }
  out += '}';
  return out;
}

void json_subset(JsonWriter& writer, const Occupation& occ, int site_count) {
  writer.begin_array();
  for (const int site : one_based_sites(occ, site_count)) {
    writer.value(site);
  }
  writer.end_array();
}

void json_subset_list(JsonWriter& writer,
                      const std::vector<Occupation>& subsets,
                      int site_count) {
  writer.begin_array();
  for (const Occupation& occ : subsets) {
    json_subset(writer, occ, site_count);
  }
  writer.end_array();
}

void json_double_array(JsonWriter& writer, const std::vector<double>& values) {
  writer.begin_array();
  for (const double value : values) {
    writer.value(value);
  }
  writer.end_array();
}

std::string fixed_row(const std::string& label, const std::string& value) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "%-16s%s\n", label.c_str(),
                value.c_str());
  return buffer;
}

int cmd_table(const CommonOptions& options) {
  const RunConfig run = load_run_config(options.config_path);
  const SiteConfiguration geometry = resolve_geometry(run, options);
  const ExternalPotential& potential =
      need_potential(run, options.config_path);
  const EnergyProfile profile = energy_profile(geometry, potential);
  const int site_count = geometry.site_count();

  std::string text;
  {
    char header[128];
    std::snprintf(header, sizeof(header), "sites %d, exponent %s\n",
                  site_count, format_number(geometry.exponent_s).c_str());
    text += header;
  }
  text += "  N       energy  minimizers\n";
  for (int count = 1; count <= site_count; ++count) {
    char row[64];
    std::snprintf(row, sizeof(row), "%3d %12s  ", count,
                  format_fixed(profile.energies[count], 4).c_str());
    text += row;
    bool first = true;
    for (const Occupation& occ : profile.minimizers[count]) {
      if (!first) {
        text += ' ';
      }
      text += subset_text(occ, site_count);
      first = false;
    }
    text += '\n';
  }
  text += "violations:";
  if (profile.violations.empty()) {
    text += " none";
  } else {
    for (const int count : profile.violations) {
      text += ' ';
      text += std::to_string(count);
    }
  }
  text += '\n';
  std::fputs(text.c_str(), stdout);

  JsonWriter json;
  json.begin_object();
  json.key("sites").value(site_count);
  json.key("exponent").value(geometry.exponent_s);
  json.key("rows").begin_array();
  for (int count = 1; count <= site_count; ++count) {
    json.begin_object();
    json.key("electrons").value(count);
    json.key("energy").value(profile.energies[count]);
    json.key("minimizers");
    json_subset_list(json, profile.minimizers[count], site_count);
    json.end_object();
  }
  json.end_array();
  json.key("envelope");
  json_double_array(json, profile.envelope);
  json.key("violations").begin_array();
  for (const int count : profile.violations) {
    json.value(count);
  }
  json.end_array();
  json.end_object();

  const std::string line = json.str() + "\n";
  if (options.out_path.empty()) {
    std::fputs(line.c_str(), stdout);
  } else {
    write_file_atomic(options.out_path, line);
  }
  return kExitSuccess;
}

int cmd_dual(const CommonOptions& options) {
  const RunConfig run = load_run_config(options.config_path);
  const SiteConfiguration geometry = resolve_geometry(run, options);
  const DensityVector& rho = need_density(run, options.config_path);
  const std::vector<SitePermutation> symmetry =
      options.symmetrize ? run.symmetries : std::vector<SitePermutation>{};
  const std::map<int, double> pinned =
      options.symmetrize ? run.pins : std::map<int, double>{};
  const DualCertificate certificate =
      dual_potential(geometry, rho, symmetry, pinned);
  const FunctionalValue functional = gc_functional(geometry, rho);
  const int site_count = geometry.site_count();

  std::string text = "dual potential ";
  for (const double v : certificate.potential) {
    text += ' ';
    text += format_fixed(v, 4);
  }
  text += '\n';
  text += fixed_row("ground energy",
                    format_fixed(certificate.gc_ground_energy, 4));
  text += fixed_row("functional", format_fixed(functional.value, 4));
  text += fixed_row("face dimension",
                    std::to_string(certificate.face_dimension));
  std::fputs(text.c_str(), stdout);

  JsonWriter json;
  json.begin_object();
  json.key("density");
  json_double_array(json, rho);
  json.key("potential");
  json_double_array(json, certificate.potential);
  json.key("ground_energy").value(certificate.gc_ground_energy);
  json.key("functional").value(functional.value);
  json.key("gap_check").value(certificate.gap_check);
  json.key("face_dimension").value(certificate.face_dimension);
  json.key("active_subsets");
  json_subset_list(json, certificate.active_subsets, site_count);
  json.end_object();

  const std::string line = json.str() + "\n";
  if (options.out_path.empty()) {
    std::fputs(line.c_str(), stdout);
  } else {
    write_file_atomic(options.out_path, line);
  }
  return kExitSuccess;
}

int cmd_certify(const CommonOptions& options) {
  const RunConfig run = load_run_config(options.config_path);
  const SiteConfiguration geometry = resolve_geometry(run, options);
  const ExternalPotential& potential =
      need_potential(run, options.config_path);
  const CertificationReport report =
      certify_counterexample(geometry, potential, options.electrons);
  const int site_count = geometry.site_count();

  std::string text;
  text += fixed_row("electrons", std::to_string(report.cardinality));
  text += fixed_row("energy below", format_fixed(report.below.value, 4));
  text += fixed_row("energy at", format_fixed(report.at.value, 4));
  text += fixed_row("energy above", format_fixed(report.above.value, 4));
  text += fixed_row("midpoint", format_fixed(report.midpoint, 4));
  text += fixed_row("margin", format_fixed(report.margin, 4));
  text += fixed_row("certified", report.passed ? "yes" : "no");
  std::fputs(text.c_str(), stdout);

  JsonWriter json;
  json.begin_object();
  json.key("electrons").value(report.cardinality);
  json.key("energy_below").value(report.below.value);
  json.key("energy_at").value(report.at.value);
  json.key("energy_above").value(report.above.value);
  json.key("midpoint").value(report.midpoint);
  json.key("margin").value(report.margin);
  json.key("certified").value(report.passed);
  json.key("minimizers");
  json_subset_list(json, report.at.minimizers, site_count);
  json.end_object();

  const std::string line = json.str() + "\n";
  if (options.out_path.empty()) {
    std::fputs(line.c_str(), stdout);
  } else {
    write_file_atomic(options.out_path, line);
  }
  return report.passed ? kExitSuccess : kExitNotViolated;
}

int cmd_grid(const CommonOptions& options) {
  const RunConfig run = load_run_config(options.config_path);
  const SiteConfiguration geometry = resolve_geometry(run, options);
  if (!run.grid.has_value()) {
    throw ConfigError(options.config_path, 0, "missing [grid] section");
  }
  const GridSpec& spec = *run.grid;
  const HardnessGrid grid =
      hardness_grid(geometry, spec.v1_range, spec.v3_range, spec.steps,
                    spec.fixed_vertical);

  std::size_t best = 0;
  for (std::size_t cell = 1; cell < grid.eta.size(); ++cell) {
    if (grid.eta[cell] < grid.eta[best]) {
      best = cell;
    }
  }
  const std::size_t columns = grid.v3_magnitudes.size();
  emit_artifact(options, hardness_grid_csv(grid));
  if (!options.out_path.empty()) {
    char summary[160];
    std::snprintf(summary, sizeof(summary),
                  "minimum eta %s at v1_abs %s, v3_abs %s\n",
                  format_number(grid.eta[best]).c_str(),
                  format_number(grid.v1_magnitudes[best / columns]).c_str(),
                  format_number(grid.v3_magnitudes[best % columns]).c_str());
    std::fputs(summary, stdout);
  }
  return kExitSuccess;
}

int cmd_search(const CommonOptions& options) {
  const RunConfig run = load_run_config(options.config_path);
  if (!run.search.has_value()) {
    throw ConfigError(options.config_path, 0, "missing [search] section");
  }
  SearchSpec spec = *run.search;
  if (options.seed.has_value()) {
    spec.seed = *options.seed;
  }
  const std::vector<GapSample> samples = random_geometry_search(
      spec.sites, spec.trials, spec.box_halfwidth, spec.seed, run.density,
      options.jobs, spec.dimensions == 3);

  JsonWriter json;
  json.begin_object();
  json.key("sites").value(spec.sites);
  json.key("trials").value(static_cast<long long>(spec.trials));
  json.key("seed").value(static_cast<std::uint64_t>(spec.seed));
  json.key("halfwidth").value(spec.box_halfwidth);
  json.key("dimensions").value(spec.dimensions);
  json.key("positive_samples")
      .value(static_cast<long long>(samples.size()));
  json.key("samples").begin_array();
  for (const GapSample& sample : samples) {
    json.begin_object();
    json.key("points").begin_array();
    for (const Vec3& point : sample.config.points) {
      json.begin_array();
      json.value(point[0]).value(point[1]).value(point[2]);
      json.end_array();
    }
    json.end_array();
    json.key("density");
    json_double_array(json, sample.rho);
    json.key("canonical").value(sample.f_canonical);
    json.key("ensemble").value(sample.f_gc);
    json.key("gap").value(sample.gap);
    json.key("relative_gap").value(sample.relative_gap);
    json.end_object();
  }
  json.end_array();
  json.end_object();

  emit_artifact(options, json.str() + "\n");
  if (!options.out_path.empty()) {
    char summary[96];
    std::snprintf(summary, sizeof(summary),
                  "positive samples %zu of %ld\n", samples.size(),
                  spec.trials);
    std::fputs(summary, stdout);
  }
  return samples.empty() ? kExitNotViolated : kExitSuccess;
}

int cmd_quantum(const CommonOptions& options) {
  const RunConfig run = load_run_config(options.config_path);
  const SiteConfiguration geometry = resolve_geometry(run, options);
  const ExternalPotential& potential =
      need_potential(run, options.config_path);
  const ScaledNuclearSystem system =
      scale_system(geometry, potential, options.ell);
  const BindingReport report = binding_report(geometry, potential);
  const int max_binding = lieb_max_binding(system);

  std::string text;
  text += fixed_row("ell", format_number(options.ell));
  text += "charges        ";
  for (const double charge : system.charges) {
    text += ' ';
    text += format_fixed(charge, 4);
  }
  text += '\n';
  text += fixed_row("max binding", std::to_string(max_binding));
  text += "  N  scaled energy  binds\n";
  for (const BindingRow& row : report.rows) {
    char line[64];
    std::snprintf(line, sizeof(line), "%3d %14s  %s\n", row.electron_count,
                  format_fixed(row.predicted, 4).c_str(),
                  row.binds ? "yes" : "no");
    text += line;
  }
  std::fputs(text.c_str(), stdout);

  JsonWriter json;
  json.begin_object();
  json.key("ell").value(options.ell);
  json.key("charges");
  json_double_array(json, system.charges);
  json.key("max_binding").value(max_binding);
  json.key("rows").begin_array();
  for (const BindingRow& row : report.rows) {
    json.begin_object();
    json.key("electrons").value(row.electron_count);
    json.key("scaled_energy").value(row.predicted);
    json.key("minimizing_count").value(row.minimizing_count);
    json.key("binds").value(row.binds);
    json.end_object();
  }
  json.end_array();
  json.end_object();
  std::fputs((json.str() + "\n").c_str(), stdout);

  if (!options.out_path.empty()) {
    write_file_atomic(options.out_path, binding_profile_csv(report));
  }
  return kExitSuccess;
}

int cmd_verify(const CommonOptions& options) {
  const std::uint64_t seed =
      options.seed.value_or(kDefaultVerificationSeed);
  const std::vector<SuiteReport> reports = {
      run_k4_equality_suite(200, seed, options.jobs),
      run_exchange_identity_suite(200, seed),
      run_collinear_equality_suite(200, seed, options.jobs),
      run_lp_oracle_suite(500, seed, options.jobs),
      run_envelope_consistency_suite(100, seed, options.jobs),
  };

  bool all_passed = true;
  std::string text;
  for (const SuiteReport& report : reports) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%-20s trials %4ld  worst %-18s tolerance %-6s %s\n",
                  report.name.c_str(), report.trials,
                  format_number(report.worst).c_str(),
                  format_number(report.tolerance).c_str(),
                  report.passed() ? "pass" : "FAIL");
    text += line;
    all_passed = all_passed && report.passed();
  }
  std::fputs(text.c_str(), stdout);

  JsonWriter json;
  json.begin_object();
  json.key("seed").value(seed);
  json.key("suites").begin_array();
  for (const SuiteReport& report : reports) {
    json.begin_object();
    json.key("name").value(report.name);
    json.key("trials").value(static_cast<long long>(report.trials));
    json.key("failures").value(static_cast<long long>(report.failures));
    json.key("worst").value(report.worst);
    json.key("tolerance").value(report.tolerance);
    json.key("passed").value(report.passed());
    json.end_object();
  }
  json.end_array();
  json.key("passed").value(all_passed);
  json.end_object();

  const std::string line = json.str() + "\n";
  if (options.out_path.empty()) {
    std::fputs(line.c_str(), stdout);
  } else {
    write_file_atomic(options.out_path, line);
  }
  return all_passed ? kExitSuccess : kExitNotViolated;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const InfeasibleDensity& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return kExitInfeasible;
  } catch (const Error& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return kExitInputError;
  }
}

void add_config_option(CLI::App* command, CommonOptions* options) {
  command->add_option("--config", options->config_path,
                      "run configuration file")
      ->required();
}

void add_out_option(CLI::App* command, CommonOptions* options) {
  command->add_option("--out", options->out_path,
                      "write the machine-readable output to this file");
}

void add_exponent_option(CLI::App* command, CommonOptions* options) {
  command
      ->add_option("--exponent", options->exponent,
                   "override the interaction exponent")
      ->check(CLI::PositiveNumber);
}

void add_jobs_option(CLI::App* command, CommonOptions* options) {
  command->add_option("--jobs", options->jobs, "worker thread count")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"site model of interacting electrons on finite geometries"};
  app.require_subcommand(1);
  CommonOptions options;
  int exit_code = kExitSuccess;
  const auto install = [&](CLI::App* command, int (*body)(
                                                  const CommonOptions&)) {
    command->callback(
        [&options, &exit_code, body] {
          exit_code = run_guarded([&options, body] { return body(options); });
        });
  };

  CLI::App* table = app.add_subcommand(
      "table", "ground-state energies and minimizers per electron count");
  add_config_option(table, &options);
  add_out_option(table, &options);
  add_exponent_option(table, &options);
  install(table, cmd_table);

  CLI::App* dual = app.add_subcommand(
      "dual", "dual potential certifying the density functional value");
  add_config_option(dual, &options);
  add_out_option(dual, &options);
  add_exponent_option(dual, &options);
  dual->add_flag("--symmetrize", options.symmetrize,
                 "apply the declared symmetries and pins to the dual");
  install(dual, cmd_dual);

  CLI::App* certify = app.add_subcommand(
      "certify", "test the energy profile for a strict convexity violation");
  add_config_option(certify, &options);
  add_out_option(certify, &options);
  add_exponent_option(certify, &options);
  certify
      ->add_option("--n", options.electrons,
                   "electron count whose midpoint bound is tested")
      ->check(CLI::PositiveNumber);
  install(certify, cmd_certify);

  CLI::App* grid = app.add_subcommand(
      "grid", "hardness over a grid of well-depth magnitudes");
  add_config_option(grid, &options);
  add_out_option(grid, &options);
  add_exponent_option(grid, &options);
  install(grid, cmd_grid);

  CLI::App* search = app.add_subcommand(
      "search", "random geometries ranked by functional gap");
  add_config_option(search, &options);
  add_out_option(search, &options);
  search->add_option("--seed", options.seed,
                     "override the seed declared in the config");
  add_jobs_option(search, &options);
  install(search, cmd_search);

  CLI::App* quantum = app.add_subcommand(
      "quantum", "dissociation limit: charges, binding, energy profile");
  add_config_option(quantum, &options);
  add_out_option(quantum, &options);
  add_exponent_option(quantum, &options);
  quantum
      ->add_option("--ell", options.ell,
                   "separation scale of the stretched geometry")
      ->check(CLI::PositiveNumber);
  install(quantum, cmd_quantum);

  CLI::App* verify = app.add_subcommand(
      "verify", "randomized self-checks against independent oracles");
  add_out_option(verify, &options);
  verify->add_option("--seed", options.seed,
                     "seed for the randomized suites");
  add_jobs_option(verify, &options);
  install(verify, cmd_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? kExitSuccess : kExitInputError;
  }
  return exit_code;
}
