// Copyright 2026 The spinmacro Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Locale-independent decimal formatting shared by every text format the
// library writes (MSDM, CSV). Doubles are written with 17 significant
// digits, which round-trips every finite IEEE-754 binary64 value.

#include <array>
#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "spinmacro/error.hpp"

namespace spinmacro {

inline std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc{}) throw InvalidArgument("format_double: conversion failed");
  return std::string(buf.data(), end);
}

/// Parses the whole of `text` as a double; throws FormatError otherwise.
inline double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw FormatError("not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace spinmacro
