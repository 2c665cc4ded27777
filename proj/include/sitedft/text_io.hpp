#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sitedft/asymptotics.hpp"
#include "sitedft/search.hpp"

namespace sitedft {

// Formats a finite double with 12 significant digits, independent of locale.
// Equal doubles always produce equal strings, so emitted files are
// byte-stable across runs and platforms.
std::string format_number(double value);

// Formats a finite double in fixed notation with the given number of
// decimals. Used for aligned text tables.
std::string format_fixed(double value, int decimals);

// Streams a single-line JSON document. Keys appear in insertion order and
// numbers go through format_number, so a document built from the same data
// is byte-identical on every run. The writer does not validate nesting
// beyond matching begin/end pairs.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);

  JsonWriter& value(double number);
  JsonWriter& value(int number);
  JsonWriter& value(long long number);
  JsonWriter& value(std::uint64_t number);
  JsonWriter& value(bool flag);
  JsonWriter& value(const char* text);
  JsonWriter& value(const std::string& text);

  // The document built so far. Call after the outermost end_object/end_array.
  const std::string& str() const { return out_; }

 private:
  void prefix();
  void literal(const std::string& text);

  std::string out_;
  std::vector<bool> needs_comma_;
  bool pending_key_ = false;
};

// CSV with header "v1_abs,v3_abs,eta", one row per grid cell, the first
// magnitude varying slowest.
std::string hardness_grid_csv(const HardnessGrid& grid);

// CSV with header "electrons,scaled_energy", one row per electron count.
std::string binding_profile_csv(const BindingReport& report);

// Writes content to path via a temporary file and an atomic rename, so a
// failed run never leaves a partial file behind. Throws IoError on failure.
void write_file_atomic(const std::string& path, const std::string& content);

// Reads a whole file into a string. Throws IoError if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace sitedft
