// csdet/common.hpp

// Copyright 2026  csdet authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csdet {

// Input-side failures: unreadable files, malformed records, arguments that
// violate a documented precondition.  The CLI maps every InputError to exit
// code 2; anything else escaping to main() is an internal error (exit 1).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : InputError {
  using InputError::InputError;
};

struct ValidationError : InputError {
  using InputError::InputError;
};

struct IoError : InputError {
  using InputError::InputError;
};

// All times are carried as integer milliseconds so that frame arithmetic is
// exact.  Input seconds are rounded half up at the millisecond.
using Millis = std::int64_t;

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Parses a non-negative decimal number of seconds ("0.50", "12", "1.2345")
// into milliseconds.  Signs, exponents and anything but [0-9.] are rejected.
inline std::optional<Millis> parse_seconds_ms(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t dot = std::string_view::npos;
  std::size_t digits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (dot != std::string_view::npos) return std::nullopt;
      dot = i;
    } else if (c >= '0' && c <= '9') {
      ++digits;
    } else {
      return std::nullopt;
    }
  }
  if (digits == 0) return std::nullopt;
  std::string_view whole = text.substr(0, dot == std::string_view::npos ? text.size() : dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.size() > 12) return std::nullopt;  // > ~31,000 years; clearly bogus
  Millis ms = 0;
  for (char c : whole) ms = ms * 10 + (c - '0');
  ms *= 1000;
  constexpr Millis scale[3] = {100, 10, 1};
  for (std::size_t i = 0; i < 3 && i < frac.size(); ++i) ms += (frac[i] - '0') * scale[i];
  if (frac.size() > 3 && frac[3] >= '5') ++ms;  // round half up at 1 ms
  return ms;
}

// Canonical rendering: two decimals when the value is a whole number of
// centiseconds, three otherwise, so every stored value round-trips exactly.
inline std::string format_seconds(Millis ms) {
  char buf[40];
  if (ms % 10 == 0) {
    std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(ms / 1000),
                  static_cast<long long>((ms % 1000) / 10));
  } else {
    std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(ms / 1000),
                  static_cast<long long>(ms % 1000));
  }
  return buf;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes via a temp file in the same directory followed by a rename, so a
// crash never leaves a truncated output behind.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace csdet
