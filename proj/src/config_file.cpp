#include "sitedft/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sitedft/errors.hpp"
#include "sitedft/text_io.hpp"

namespace sitedft {

namespace {

struct RawEntry {
  int line = 0;
  std::string key;
  std::vector<std::string> tokens;
};

struct RawSection {
  bool present = false;
  int line = 0;
  std::vector<RawEntry> entries;
};

struct RawFile {
  RawSection geometry;
  RawSection potential;
  RawSection density;
  RawSection grid;
  RawSection search;
};

std::string trim(const std::string& text) {
  const char* space = " \t\r";
  const std::size_t first = text.find_first_not_of(space);
  if (first == std::string::npos) {
    return "";
  }
  const std::size_t last = text.find_last_not_of(space);
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) {
      ++pos;
    }
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') {
      ++end;
    }
    if (end > pos) {
      tokens.push_back(text.substr(pos, end - pos));
    }
    pos = end;
  }
  return tokens;
}

double parse_double_token(const std::string& path, int line,
                          const std::string& token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end ||
      !std::isfinite(value)) {
    throw ConfigError(path, line, "malformed number '" + token + "'");
  }
  return value;
}

long long parse_integer_token(const std::string& path, int line,
                              const std::string& token) {
  long long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw ConfigError(path, line, "malformed integer '" + token + "'");
  }
  return value;
}

std::uint64_t parse_seed_token(const std::string& path, int line,
                               const std::string& token) {
  std::uint64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw ConfigError(path, line, "malformed seed '" + token + "'");
  }
  return value;
}

void require_token_count(const std::string& path, const RawEntry& entry,
                         std::size_t count) {
  if (entry.tokens.size() != count) {
    throw ConfigError(path, entry.line,
                      "expected " + std::to_string(count) +
                          " value(s) for '" + entry.key + "', got " +
                          std::to_string(entry.tokens.size()));
  }
}

std::vector<double> parse_doubles(const std::string& path,
                                  const RawEntry& entry) {
  std::vector<double> values;
  values.reserve(entry.tokens.size());
  for (const std::string& token : entry.tokens) {
    values.push_back(parse_double_token(path, entry.line, token));
  }
  return values;
}

RawFile scan_lines(const std::string& path, const std::string& content) {
  RawFile raw;
  RawSection* current = nullptr;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t newline = content.find('\n', pos);
    const std::size_t end =
        newline == std::string::npos ? content.size() : newline;
    const std::string line = trim(content.substr(pos, end - pos));
    ++line_number;
    pos = end + 1;
    if (newline == std::string::npos && line.empty()) {
      break;
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(path, line_number, "unterminated section header");
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      RawSection* section = nullptr;
      if (name == "geometry") {
        section = &raw.geometry;
      } else if (name == "potential") {
        section = &raw.potential;
      } else if (name == "density") {
        section = &raw.density;
      } else if (name == "grid") {
        section = &raw.grid;
      } else if (name == "search") {
        section = &raw.search;
      } else {
        throw ConfigError(path, line_number, "unknown section [" + name + "]");
      }
      if (section->present) {
        throw ConfigError(path, line_number,
                          "duplicate section [" + name + "]");
      }
      section->present = true;
      section->line = line_number;
      current = section;
      continue;
    }
    const std::size_t equals = line.find('=');
    if (equals == std::string::npos) {
      throw ConfigError(path, line_number,
                        "line is neither a section header nor key = value");
    }
    if (current == nullptr) {
      throw ConfigError(path, line_number, "key outside of any section");
    }
    RawEntry entry;
    entry.line = line_number;
    entry.key = trim(line.substr(0, equals));
    entry.tokens = split_tokens(line.substr(equals + 1));
    if (entry.key.empty()) {
      throw ConfigError(path, line_number, "empty key");
    }
    if (entry.tokens.empty()) {
      throw ConfigError(path, line_number,
                        "no value after '" + entry.key + " ='");
    }
    current->entries.push_back(entry);
    if (newline == std::string::npos) {
      break;
    }
  }
  return raw;
}

const RawEntry* find_unique(const std::string& path,
                            const RawSection& section,
                            const std::string& key) {
  const RawEntry* found = nullptr;
  for (const RawEntry& entry : section.entries) {
    if (entry.key != key) {
      continue;
    }
    if (found != nullptr) {
      throw ConfigError(path, entry.line, "duplicate key '" + key + "'");
    }
    found = &entry;
  }
  return found;
}

void reject_unknown_keys(const std::string& path, const RawSection& section,
                         const std::string& section_name,
                         const std::vector<std::string>& known) {
  for (const RawEntry& entry : section.entries) {
    if (std::find(known.begin(), known.end(), entry.key) == known.end()) {
      throw ConfigError(path, entry.line,
                        "key '" + entry.key + "' is not valid in [" +
                            section_name + "]");
    }
  }
}

std::optional<SiteConfiguration> build_geometry(const std::string& path,
                                                const RawFile& raw) {
  const RawSection& section = raw.geometry;
  if (!section.present) {
    return std::nullopt;
  }
  reject_unknown_keys(path, section, "geometry",
                      {"point", "diamond", "exponent"});
  std::vector<Vec3> points;
  const RawEntry* diamond = find_unique(path, section, "diamond");
  const RawEntry* exponent = find_unique(path, section, "exponent");
  for (const RawEntry& entry : section.entries) {
    if (entry.key != "point") {
      continue;
    }
    require_token_count(path, entry, 3);
    const std::vector<double> coords = parse_doubles(path, entry);
    points.push_back(Vec3{coords[0], coords[1], coords[2]});
    if (diamond != nullptr) {
      throw ConfigError(path, entry.line,
                        "geometry declares both point and diamond lines");
    }
  }
  if (diamond == nullptr && points.empty()) {
    throw ConfigError(path, section.line,
                      "[geometry] declares neither point nor diamond");
  }
  double exponent_s = 1.0;
  if (exponent != nullptr) {
    require_token_count(path, *exponent, 1);
    exponent_s = parse_double_token(path, exponent->line,
                                   exponent->tokens[0]);
    if (exponent_s <= 0.0) {
      throw ConfigError(path, exponent->line,
                        "exponent must be positive");
    }
  }
  SiteConfiguration config;
  if (diamond != nullptr) {
    require_token_count(path, *diamond, 3);
    const std::vector<double> sides = parse_doubles(path, *diamond);
    try {
      config = diamond_configuration(sides[0], sides[1], sides[2]);
    } catch (const Error& error) {
      throw ConfigError(path, diamond->line, error.what());
    }
  } else {
    config.points = points;
  }
  config.exponent_s = exponent_s;
  try {
    validate(config);
  } catch (const Error& error) {
    throw ConfigError(path, section.line, error.what());
  }
  return config;
}

std::optional<ExternalPotential> build_potential(
    const std::string& path, const RawFile& raw,
    const std::optional<SiteConfiguration>& geometry) {
  const RawSection& section = raw.potential;
  if (!section.present) {
    return std::nullopt;
  }
  reject_unknown_keys(path, section, "potential", {"v"});
  const RawEntry* v = find_unique(path, section, "v");
  if (v == nullptr) {
    throw ConfigError(path, section.line,
                      "key 'v' is required in [potential]");
  }
  if (!geometry.has_value()) {
    throw ConfigError(path, section.line,
                      "[potential] requires a [geometry] section");
  }
  const std::vector<double> values = parse_doubles(path, *v);
  if (static_cast<int>(values.size()) != geometry->site_count()) {
    throw ConfigError(path, v->line,
                      "potential has " + std::to_string(values.size()) +
                          " entries for " +
                          std::to_string(geometry->site_count()) + " sites");
  }
  return values;
}

SitePermutation parse_symmetry(const std::string& path,
                               const RawEntry& entry, int site_count) {
  if (static_cast<int>(entry.tokens.size()) != site_count) {
    throw ConfigError(path, entry.line,
                      "symmetry must list all " +
                          std::to_string(site_count) + " sites");
  }
  SitePermutation perm(site_count, -1);
  std::vector<bool> seen(site_count, false);
  for (int k = 0; k < site_count; ++k) {
    const long long image =
        parse_integer_token(path, entry.line, entry.tokens[k]);
    if (image < 1 || image > site_count) {
      throw ConfigError(path, entry.line,
                        "site index " + std::to_string(image) +
                            " outside 1.." + std::to_string(site_count));
    }
    if (seen[image - 1]) {
      throw ConfigError(path, entry.line,
                        "symmetry repeats site " + std::to_string(image));
    }
    seen[image - 1] = true;
    perm[k] = static_cast<int>(image - 1);
  }
  return perm;
}

void build_density(const std::string& path, const RawFile& raw,
                   const std::optional<SiteConfiguration>& geometry,
                   const std::optional<SearchSpec>& search,
                   RunConfig* out) {
  const RawSection& section = raw.density;
  if (!section.present) {
    return;
  }
  reject_unknown_keys(path, section, "density", {"rho", "symmetry", "pin"});
  const RawEntry* rho = find_unique(path, section, "rho");
  if (rho == nullptr) {
    throw ConfigError(path, section.line,
                      "key 'rho' is required in [density]");
  }
  if (!geometry.has_value() && !search.has_value()) {
    throw ConfigError(
        path, section.line,
        "[density] requires a [geometry] or [search] section");
  }
  const std::vector<double> values = parse_doubles(path, *rho);
  const auto check_length = [&](int expected, const std::string& what) {
    if (static_cast<int>(values.size()) != expected) {
      throw ConfigError(path, rho->line,
                        "density has " + std::to_string(values.size()) +
                            " entries for " + std::to_string(expected) +
                            " " + what);
    }
  };
  if (geometry.has_value()) {
    check_length(geometry->site_count(), "sites");
  }
  if (search.has_value()) {
    check_length(search->sites, "search sites");
  }
  out->density = values;
  for (const RawEntry& entry : section.entries) {
    if (entry.key == "symmetry") {
      if (!geometry.has_value()) {
        throw ConfigError(path, entry.line,
                          "symmetry requires a [geometry] section");
      }
      out->symmetries.push_back(
          parse_symmetry(path, entry, geometry->site_count()));
    } else if (entry.key == "pin") {
      if (!geometry.has_value()) {
        throw ConfigError(path, entry.line,
                          "pin requires a [geometry] section");
      }
      require_token_count(path, entry, 2);
      const long long site =
          parse_integer_token(path, entry.line, entry.tokens[0]);
      if (site < 1 || site > geometry->site_count()) {
        throw ConfigError(path, entry.line,
                          "site index " + std::to_string(site) +
                              " outside 1.." +
                              std::to_string(geometry->site_count()));
      }
      const double value =
          parse_double_token(path, entry.line, entry.tokens[1]);
      const int zero_based = static_cast<int>(site - 1);
      if (out->pins.count(zero_based) != 0) {
        throw ConfigError(path, entry.line,
                          "duplicate pin for site " + std::to_string(site));
      }
      out->pins[zero_based] = value;
    }
  }
}

std::optional<GridSpec> build_grid(
    const std::string& path, const RawFile& raw,
    const std::optional<SiteConfiguration>& geometry) {
  const RawSection& section = raw.grid;
  if (!section.present) {
    return std::nullopt;
  }
  reject_unknown_keys(path, section, "grid",
                      {"v1", "v3", "steps", "fixed"});
  if (!geometry.has_value()) {
    throw ConfigError(path, section.line,
                      "[grid] requires a [geometry] section");
  }
  GridSpec spec;
  const auto range_key = [&](const std::string& key) {
    const RawEntry* entry = find_unique(path, section, key);
    if (entry == nullptr) {
      throw ConfigError(path, section.line,
                        "key '" + key + "' is required in [grid]");
    }
    require_token_count(path, *entry, 2);
    const std::vector<double> bounds = parse_doubles(path, *entry);
    if (bounds[0] <= 0.0 || bounds[1] <= 0.0) {
      throw ConfigError(path, entry->line,
                        "magnitudes in '" + key + "' must be positive");
    }
    if (bounds[1] < bounds[0]) {
      throw ConfigError(path, entry->line,
                        "range upper bound below lower bound");
    }
    return std::pair<double, double>{bounds[0], bounds[1]};
  };
  spec.v1_range = range_key("v1");
  spec.v3_range = range_key("v3");
  const RawEntry* steps = find_unique(path, section, "steps");
  if (steps == nullptr) {
    throw ConfigError(path, section.line,
                      "key 'steps' is required in [grid]");
  }
  require_token_count(path, *steps, 1);
  const long long step_count =
      parse_integer_token(path, steps->line, steps->tokens[0]);
  if (step_count < 2 || step_count > 100000) {
    throw ConfigError(path, steps->line,
                      "steps must lie between 2 and 100000");
  }
  spec.steps = static_cast<int>(step_count);
  const RawEntry* fixed = find_unique(path, section, "fixed");
  if (fixed == nullptr) {
    throw ConfigError(path, section.line,
                      "key 'fixed' is required in [grid]");
  }
  require_token_count(path, *fixed, 1);
  spec.fixed_vertical =
      parse_double_token(path, fixed->line, fixed->tokens[0]);
  return spec;
}

std::optional<SearchSpec> build_search(const std::string& path,
                                       const RawFile& raw) {
  const RawSection& section = raw.search;
  if (!section.present) {
    return std::nullopt;
  }
  reject_unknown_keys(path, section, "search",
                      {"sites", "trials", "halfwidth", "seed", "dimensions"});
  SearchSpec spec;
  const RawEntry* trials = find_unique(path, section, "trials");
  if (trials == nullptr) {
    throw ConfigError(path, section.line,
                      "key 'trials' is required in [search]");
  }
  require_token_count(path, *trials, 1);
  const long long trial_count =
      parse_integer_token(path, trials->line, trials->tokens[0]);
  if (trial_count < 0) {
    throw ConfigError(path, trials->line, "trials must be nonnegative");
  }
  spec.trials = static_cast<long>(trial_count);
  if (const RawEntry* sites = find_unique(path, section, "sites")) {
    require_token_count(path, *sites, 1);
    const long long count =
        parse_integer_token(path, sites->line, sites->tokens[0]);
    if (count < 2 || count > kMaxSites) {
      throw ConfigError(path, sites->line,
                        "sites must lie between 2 and " +
                            std::to_string(kMaxSites));
    }
    spec.sites = static_cast<int>(count);
  }
  if (const RawEntry* halfwidth = find_unique(path, section, "halfwidth")) {
    require_token_count(path, *halfwidth, 1);
    spec.box_halfwidth =
        parse_double_token(path, halfwidth->line, halfwidth->tokens[0]);
    if (spec.box_halfwidth <= 0.0) {
      throw ConfigError(path, halfwidth->line,
                        "halfwidth must be positive");
    }
  }
  if (const RawEntry* seed = find_unique(path, section, "seed")) {
    require_token_count(path, *seed, 1);
    spec.seed = parse_seed_token(path, seed->line, seed->tokens[0]);
  }
  if (const RawEntry* dims = find_unique(path, section, "dimensions")) {
    require_token_count(path, *dims, 1);
    const long long value =
        parse_integer_token(path, dims->line, dims->tokens[0]);
    if (value != 2 && value != 3) {
      throw ConfigError(path, dims->line, "dimensions must be 2 or 3");
    }
    spec.dimensions = static_cast<int>(value);
  }
  return spec;
}

}  // namespace

RunConfig parse_run_config(const std::string& path,
                           const std::string& content) {
  const RawFile raw = scan_lines(path, content);
  RunConfig config;
  config.geometry = build_geometry(path, raw);
  config.potential = build_potential(path, raw, config.geometry);
  config.search = build_search(path, raw);
  build_density(path, raw, config.geometry, config.search, &config);
  config.grid = build_grid(path, raw, config.geometry);
  return config;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(path, read_file(path));
}

}  // namespace sitedft
