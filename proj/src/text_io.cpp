#include "sitedft/text_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sitedft/errors.hpp"

namespace sitedft {

namespace {

std::string to_chars_string(double value, std::chars_format format,
                            int precision) {
  std::array<char, 64> buffer;
  const auto result = std::to_chars(buffer.data(),
                                    buffer.data() + buffer.size(), value,
                                    format, precision);
  if (result.ec != std::errc()) {
    throw NumericalBreakdown("failed to format a floating point value");
  }
  return std::string(buffer.data(), result.ptr);
}

std::string escape_json(const std::string& text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (const char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char code[8];
          std::snprintf(code, sizeof(code), "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += code;
        } else {
          out += c;
        }
        break;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) {
    throw NumericalBreakdown("cannot format a non-finite value");
  }
  // -0.0 and 0.0 compare equal, so they must print the same way.
  if (value == 0.0) {
    return "0";
  }
  return to_chars_string(value, std::chars_format::general, 12);
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) {
    throw NumericalBreakdown("cannot format a non-finite value");
  }
  if (decimals < 0 || decimals > 17) {
    throw BadRange("decimal count must lie between 0 and 17");
  }
  double rounded = value;
  // Avoid the "-0.0000" artifact when a tiny negative rounds to zero.
  if (rounded == 0.0 ||
      std::abs(rounded) < 0.5 * std::pow(10.0, -decimals)) {
    rounded = std::abs(rounded);
  }
  return to_chars_string(rounded, std::chars_format::fixed, decimals);
}

void JsonWriter::prefix() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!needs_comma_.empty()) {
    if (needs_comma_.back()) {
      out_ += ',';
    }
    needs_comma_.back() = true;
  }
}

void JsonWriter::literal(const std::string& text) {
  prefix();
  out_ += text;
}

JsonWriter& JsonWriter::begin_object() {
  prefix();
  out_ += '{';
  needs_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  needs_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  prefix();
  out_ += '[';
  needs_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  needs_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  prefix();
  out_ += '"';
  out_ += escape_json(name);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double number) {
  literal(format_number(number));
  return *this;
}

JsonWriter& JsonWriter::value(int number) {
  return value(static_cast<long long>(number));
}

JsonWriter& JsonWriter::value(long long number) {
  literal(std::to_string(number));
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t number) {
  literal(std::to_string(number));
  return *this;
}

JsonWriter& JsonWriter::value(bool flag) {
  literal(flag ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::value(const char* text) {
  return value(std::string(text));
}

JsonWriter& JsonWriter::value(const std::string& text) {
  prefix();
  out_ += '"';
  out_ += escape_json(text);
  out_ += '"';
  return *this;
}

std::string hardness_grid_csv(const HardnessGrid& grid) {
  std::string out = "v1_abs,v3_abs,eta\n";
  std::size_t cell = 0;
  for (const double v1 : grid.v1_magnitudes) {
    for (const double v3 : grid.v3_magnitudes) {
      out += format_number(v1);
      out += ',';
      out += format_number(v3);
      out += ',';
      out += format_number(grid.eta[cell]);
      out += '\n';
      ++cell;
    }
  }
  return out;
}

std::string binding_profile_csv(const BindingReport& report) {
  std::string out = "electrons,scaled_energy\n";
  for (const BindingRow& row : report.rows) {
    out += std::to_string(row.electron_count);
    out += ',';
    out += format_number(row.predicted);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
    if (!stream) {
      throw IoError("cannot open " + temp + " for writing");
    }
    stream.write(content.data(),
                 static_cast<std::streamsize>(content.size()));
    stream.flush();
    if (!stream) {
      std::remove(temp.c_str());
      throw IoError("failed while writing " + temp);
    }
  }
  if (std::rename(temp.c_str(), path.c_str()) != 0) {
    std::remove(temp.c_str());
    throw IoError("cannot move " + temp + " to " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw IoError("cannot open " + path + " for reading");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  if (stream.bad()) {
    throw IoError("failed while reading " + path);
  }
  return buffer.str();
}

}  // namespace sitedft
